#include "harvest/cache.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "json.hpp"

#include "harvest/errors.hpp"

namespace harvest {

namespace {

using json = nlohmann::json;

std::string sha256_hex(const std::string& text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

json diag_json(const ElementDiagnostics& d) {
  return json{{"image_terms", d.image_terms},
              {"quad_error", hexfloat(d.quad_error)},
              {"evaluations", d.evaluations},
              {"clipped", d.clipped}};
}

ElementDiagnostics diag_from(const json& j) {
  ElementDiagnostics d;
  d.image_terms = j.at("image_terms").get<long>();
  d.quad_error = parse_hexfloat(j.at("quad_error").get<std::string>());
  d.evaluations = j.at("evaluations").get<long>();
  d.clipped = j.at("clipped").get<bool>();
  return d;
}

std::atomic<unsigned long> g_tmp_counter{0};

}  // namespace

std::string hexfloat(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::hex);
  return std::string(buf, res.ptr);
}

double parse_hexfloat(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v, std::chars_format::hex);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("bad hexfloat '" + s + "'");
  }
  return v;
}

std::string code_version() { return HARVEST_VERSION; }

std::string canonical_description(const DetectorConfiguration& cfg, const NumericsControls& ctrl) {
  std::ostringstream os;
  const auto& bg = cfg.background();
  os << "numerics=" << kNumericsVersion << ";code=" << code_version() << ";ell=" << hexfloat(bg.ell())
     << ";mass=" << hexfloat(bg.mass()) << ";zeta=" << bg.zeta();
  for (const auto& d : cfg.detectors()) {
    os << ";det=" << hexfloat(d.radius()) << "," << hexfloat(d.phi()) << "," << hexfloat(d.gap());
  }
  os << ";quad=" << hexfloat(ctrl.quad.tol_rel) << "," << hexfloat(ctrl.quad.tol_abs) << ","
     << ctrl.quad.max_subdivisions;
  os << ";image=" << hexfloat(ctrl.image.tol_rel) << "," << hexfloat(ctrl.image.tol_abs) << ","
     << ctrl.image.consecutive_small << "," << ctrl.image.n_cap;
  os << ";branch=" << ctrl.branch_sign;
  return os.str();
}

std::string cache_key(const DetectorConfiguration& cfg, const NumericsControls& ctrl) {
  return sha256_hex(canonical_description(cfg, ctrl));
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("HARVEST_CACHE_DIR"); env && *env) return env;
  if (const char* home = std::getenv("HOME"); home && *home) {
    return std::filesystem::path(home) / ".cache" / "harvest";
  }
  return std::filesystem::temp_directory_path() / "harvest-cache";
}

ResultCache::ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path ResultCache::path_for(const std::string& key) const {
  return dir_ / key.substr(0, 2) / (key + ".json");
}

std::optional<CorrelatorSet> ResultCache::load(const std::string& key) const {
  std::ifstream in(path_for(key));
  if (!in) return std::nullopt;
  try {
    json j;
    in >> j;
    CorrelatorSet cs;
    cs.detectors = j.at("detectors").get<int>();
    for (std::size_t i = 0; i < 3; ++i) {
      cs.P[i] = parse_hexfloat(j.at("P").at(i).get<std::string>());
      cs.C[i] = parse_hexfloat(j.at("C").at(i).get<std::string>());
      cs.X[i] = {parse_hexfloat(j.at("X_re").at(i).get<std::string>()),
                 parse_hexfloat(j.at("X_im").at(i).get<std::string>())};
      cs.p_diag[i] = diag_from(j.at("p_diag").at(i));
      cs.pair_diag[i] = diag_from(j.at("pair_diag").at(i));
    }
    cs.warnings = j.at("warnings").get<std::vector<std::string>>();
    return cs;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

bool ResultCache::store(const std::string& key, const CorrelatorSet& cs) const {
  json j;
  j["detectors"] = cs.detectors;
  for (std::size_t i = 0; i < 3; ++i) {
    j["P"].push_back(hexfloat(cs.P[i]));
    j["C"].push_back(hexfloat(cs.C[i]));
    j["X_re"].push_back(hexfloat(cs.X[i].real()));
    j["X_im"].push_back(hexfloat(cs.X[i].imag()));
    j["p_diag"].push_back(diag_json(cs.p_diag[i]));
    j["pair_diag"].push_back(diag_json(cs.pair_diag[i]));
  }
  j["warnings"] = cs.warnings;

  const auto target = path_for(key);
  std::error_code ec;
  std::filesystem::create_directories(target.parent_path(), ec);
  if (ec) return false;
  const auto tmp = target.parent_path() /
                   (key + ".tmp." + std::to_string(::getpid()) + "." + std::to_string(g_tmp_counter++));
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) return false;
    out << j.dump() << '\n';
    if (!out) {
      std::filesystem::remove(tmp, ec);
      return false;
    }
  }
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    return false;
  }
  return true;
}

}  // namespace harvest
