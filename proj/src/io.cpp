#include "spinlab/io.hpp"

#include <json.hpp>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace spinlab {
namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// atomic publish: the destination never holds a partial file
void write_atomic(const std::string& path, const std::string& data) {
  std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << data;
    if (!out) {
      std::remove(tmp.c_str());
      throw Error("cannot write " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error("cannot publish " + path);
  }
}

json field_json(const CyclicField& f) {
  json j;
  j["g"] = f.g;
  j["H"] = f.H;
  j["coset_table"] = f.coset_table;
  j["mult_table"] = f.mult_table;
  j["frob2_shift"] = f.frob2_shift;
  json mp = json::array();
  for (const auto& c : f.period_minpoly) mp.push_back(c.get_str());
  j["minpoly"] = mp;
  json ip = json::array();
  for (const auto& row : f.interp) {
    json r = json::array();
    for (const auto& q : row) r.push_back(q.get_str());
    ip.push_back(r);
  }
  j["interp"] = ip;
  return j;
}

json entry_json(const CacheEntry& e, bool with_checksum) {
  json j;
  j["schema_version"] = e.schema_version;
  j["params"] = {{"n", e.params.n}, {"ell", e.params.ell}, {"h", e.params.h}};
  j["field"] = field_json(e.field);
  if (e.gram) {
    j["gram"] = {
        {"provenance",
         e.gram->provenance == GramProvenance::oracle ? "oracle" : "formula"},
        {"rows", e.gram->rows}};
  }
  if (e.m_k) j["m_k"] = *e.m_k;
  if (with_checksum) j["checksum"] = e.checksum;
  return j;
}

double zscore(long count, long total, const mpq_class& target) {
  if (total <= 0) return 0.0;
  double t = mpq_get_d(target.get_mpq_t());
  double sd = std::sqrt((double)total * t * (1.0 - t));
  if (sd == 0) return 0.0;
  return ((double)count - (double)total * t) / sd;
}

std::string stamp_path() { return cache_dir() + "/gram-validation.json"; }

}  // namespace

uint64_t fnv1a(const std::string& data) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string rational_str(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string cache_dir() {
  const char* env = std::getenv("SPINLAB_CACHE");
  return env && *env ? std::string(env) : std::string("./.spinlab-cache");
}

std::string cache_path(const FieldParams& params) {
  return cache_dir() + "/field-n" + std::to_string(params.n) + "-ell" +
         std::to_string(params.ell) + ".json";
}

void cache_save(const CacheEntry& entry) {
  std::filesystem::create_directories(cache_dir());
  CacheEntry e = entry;
  e.checksum = std::to_string(fnv1a(entry_json(e, false).dump()));
  write_atomic(cache_path(e.params), entry_json(e, true).dump(2) + "\n");
}

std::optional<CacheEntry> cache_load(const FieldParams& params) {
  json j;
  try {
    std::string raw = read_file(cache_path(params));
    if (raw.empty()) return std::nullopt;
    j = json::parse(raw);
  } catch (const json::exception&) {
    return std::nullopt;
  }
  try {
    if (j.value("schema_version", -1) != 1) return std::nullopt;
    if (j["params"]["n"] != params.n || j["params"]["ell"] != params.ell ||
        j["params"]["h"] != params.h)
      return std::nullopt;
    std::string checksum = j.value("checksum", "");
    json body = j;
    body.erase("checksum");
    if (checksum != std::to_string(fnv1a(body.dump()))) return std::nullopt;

    CacheEntry e;
    e.params = params;
    e.field = build_field(params);
    // stale if the cached derivation disagrees with a fresh one
    if (field_json(e.field) != j["field"]) return std::nullopt;
    if (j.contains("gram")) {
      GramMatrix g;
      g.n = params.n;
      g.provenance = j["gram"]["provenance"] == "oracle"
                         ? GramProvenance::oracle
                         : GramProvenance::formula;
      g.rows = j["gram"]["rows"].get<std::vector<uint32_t>>();
      if ((int)g.rows.size() != params.n + 1) return std::nullopt;
      g.identity_block = true;
      for (int i = 0; i < g.n; ++i)
        if ((g.rows[i] & ((1u << g.n) - 1)) != (1u << i)) g.identity_block = false;
      e.gram = g;
    }
    if (j.contains("m_k")) e.m_k = j["m_k"].get<long>();
    e.checksum = checksum;
    return e;
  } catch (const json::exception&) {
    return std::nullopt;
  } catch (const Error&) {
    return std::nullopt;
  }
}

void stamp_validation(const std::vector<int>& passed_n) {
  std::filesystem::create_directories(cache_dir());
  json j;
  j["passed"] = passed_n;
  write_atomic(stamp_path(), j.dump() + "\n");
}

bool validation_stamped() {
  try {
    std::string raw = read_file(stamp_path());
    if (raw.empty()) return false;
    json j = json::parse(raw);
    auto passed = j["passed"].get<std::vector<int>>();
    for (int need : {1, 3, 5, 7})
      if (std::find(passed.begin(), passed.end(), need) == passed.end())
        return false;
    return true;
  } catch (const json::exception&) {
    return false;
  }
}

std::string csv_record(const PrimeRecord& rec, int n) {
  std::ostringstream line;
  line << rec.p << "," << rec.f << ",";
  for (int i = 0; i < n; ++i) line << ((rec.class_bits >> i) & 1);
  line << "," << rec.star << ",";
  for (size_t k = 0; k < rec.spins.size(); ++k) {
    if (k) line << ";";
    line << rec.spins[k];
  }
  line << ",";
  for (size_t k = 0; k < rec.generator.c.size(); ++k) {
    if (k) line << " ";
    line << rec.generator.c[k].get_str();
  }
  return line.str();
}

SampleStats sample_to_files(const CyclicField& f, const Ring8& r,
                            const GramMatrix& g, const UnitBasis& ub,
                            const SampleConfig& cfg, const SampleOutput& out) {
  int n = f.params.n;
  std::string csv_tmp;
  std::ofstream csv;
  if (!out.csv_path.empty()) {
    csv_tmp = out.csv_path + ".tmp." + std::to_string(::getpid());
    csv.open(csv_tmp, std::ios::binary | std::ios::trunc);
    if (!csv) throw Error("cannot write " + csv_tmp);
    csv << "p,f,class_bits,star,spins,generator\n";
  }
  auto cleanup = [&]() {
    if (!csv_tmp.empty()) {
      csv.close();
      std::remove(csv_tmp.c_str());
    }
  };

  SampleStats st;
  try {
    st = sample(f, r, g, ub, cfg, [&](const PrimeRecord& rec) {
      if (csv.is_open()) csv << csv_record(rec, n) << "\n";
    });
  } catch (...) {
    cleanup();
    throw;
  }
  if (csv.is_open()) {
    csv.close();
    if (!csv || std::rename(csv_tmp.c_str(), out.csv_path.c_str()) != 0) {
      std::remove(csv_tmp.c_str());
      throw Error("cannot publish " + out.csv_path);
    }
  }

  if (!out.summary_path.empty()) {
    OrbitTable ot = orbit_table(f);
    StarTable star = starlight_invariant(f, r, ot, g);
    DensityReport dens = density_report(n, star.m_k);

    json j;
    j["params"] = {{"n", n}, {"ell", f.params.ell}, {"h", cfg.h}};
    j["bound"] = cfg.bound;
    j["jobs"] = cfg.jobs;
    j["totals"] = {{"primes", st.total},
                   {"split", st.split},
                   {"inert", st.inert},
                   {"skipped", (long)st.skipped.size()}};
    j["class_counts"] = st.class_counts;
    j["star_pos"] = {{"split", st.star_pos_split},
                     {"inert", st.star_pos_inert},
                     {"all", st.star_pos_all}};
    j["all_spins_pos_split"] = st.all_spins_pos_split;
    j["consistency"] = {{"flagship_violations", st.flagship_violations},
                        {"star_spin_mismatches", st.star_spin_mismatches}};
    j["targets"] = {{"m_K", star.m_k},
                    {"D_K", rational_str(dens.D_K)},
                    {"d_RS", rational_str(dens.d_RS)},
                    {"C_K", rational_str(dens.C_K)},
                    {"C_KS", rational_str(dens.C_KS)},
                    {"class_frequency", rational_str(mpq_class(1, mpz_class(1) << n))}};
    mpq_class half(1, 2);
    double zmax = 0;
    for (long c : st.class_counts)
      zmax = std::max(zmax,
                      std::fabs(zscore(c, st.split, mpq_class(1, mpz_class(1) << n))));
    j["z_scores"] = {{"star_split", zscore(st.star_pos_split, st.split, dens.d_RS)},
                     {"star_inert", zscore(st.star_pos_inert, st.inert, half)},
                     {"star_all", zscore(st.star_pos_all, st.split + st.inert,
                                         dens.D_K)},
                     {"all_spins_pos_split",
                      zscore(st.all_spins_pos_split, st.split, dens.C_KS)},
                     {"class_max_abs", zmax}};
    json skips = json::array();
    for (const auto& s : st.skipped)
      skips.push_back({{"p", s.p}, {"reason", s.reason}});
    j["skipped"] = skips;
    write_atomic(out.summary_path, j.dump(2) + "\n");
  }
  return st;
}

}  // namespace spinlab
