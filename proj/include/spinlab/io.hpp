#pragma once
#include <optional>
#include <string>

#include "spinlab/spin.hpp"

namespace spinlab {

// Cache of per-field artifacts under $SPINLAB_CACHE (default ./.spinlab-cache).
// JSON with exact integer/rational strings; writes are atomic (tmp + rename).
struct CacheEntry {
  int schema_version = 1;
  FieldParams params;
  CyclicField field;
  std::optional<GramMatrix> gram;
  std::optional<long> m_k;
  std::string checksum;  // FNV-1a 64 over the canonical serialization
};

std::string cache_dir();
std::string cache_path(const FieldParams& params);
void cache_save(const CacheEntry& entry);
// Verifies the checksum and re-derives the multiplication table; returns
// nothing on any mismatch (treated as a stale entry).
std::optional<CacheEntry> cache_load(const FieldParams& params);

// gram validation stamp: which n passed validate_gram in this cache
void stamp_validation(const std::vector<int>& passed_n);
bool validation_stamped();

uint64_t fnv1a(const std::string& data);

std::string rational_str(const mpq_class& q);

struct SampleOutput {
  std::string csv_path;      // empty = no csv
  std::string summary_path;  // empty = no summary
};

// Runs sample() writing the CSV stream and a JSON summary with exact targets
// and z-scores.  Files appear atomically; partial output is removed on abort.
SampleStats sample_to_files(const CyclicField& f, const Ring8& r,
                            const GramMatrix& g, const UnitBasis& ub,
                            const SampleConfig& cfg, const SampleOutput& out);

std::string csv_record(const PrimeRecord& rec, int n);

}  // namespace spinlab
