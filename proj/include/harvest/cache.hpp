#pragma once

// Content-addressed on-disk store of correlator sets.
//
// Key: SHA-256 of a canonical hexfloat description of the background, every
// detector, the numerics controls, kNumericsVersion and the code version.
// Entries are JSON files written to a temporary name and renamed into place,
// so concurrent writers of the same key are harmless.
// Directory: $HARVEST_CACHE_DIR, else $HOME/.cache/harvest.

#include <filesystem>
#include <optional>
#include <string>

#include "harvest/correlators.hpp"

namespace harvest {

// Bump whenever a numerical algorithm changes its output bits.
inline constexpr int kNumericsVersion = 1;

std::string code_version();

std::string canonical_description(const DetectorConfiguration& cfg, const NumericsControls& ctrl);
std::string cache_key(const DetectorConfiguration& cfg, const NumericsControls& ctrl);

std::filesystem::path default_cache_dir();

class ResultCache {
 public:
  explicit ResultCache(std::filesystem::path dir = default_cache_dir());

  const std::filesystem::path& directory() const noexcept { return dir_; }

  std::optional<CorrelatorSet> load(const std::string& key) const;
  // Best effort: I/O failures leave the cache unchanged and return false.
  bool store(const std::string& key, const CorrelatorSet& cs) const;

 private:
  std::filesystem::path path_for(const std::string& key) const;
  std::filesystem::path dir_;
};

// Hexfloat text round trip, exact for every finite double.
std::string hexfloat(double v);
double parse_hexfloat(const std::string& s);

}  // namespace harvest
