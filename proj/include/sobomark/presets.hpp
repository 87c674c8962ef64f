#pragma once

// Parameter presets and key files, both stored as key=value text.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sobomark/chaos.hpp"
#include "sobomark/errors.hpp"
#include "sobomark/polyfamilies.hpp"
#include "sobomark/qim.hpp"
#include "sobomark/sobolev.hpp"

namespace sobomark {

namespace kv_detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

/// Parses "key = value" lines; '#' starts a comment line.
inline std::map<std::string, std::string> parse(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw FormatError("line " + std::to_string(lineno) + ": expected key=value");
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return kv;
}

inline double to_number(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw FormatError("missing key '" + key + "'");
  try {
    size_t used = 0;
    double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw FormatError("key '" + key + "' is not a number: '" + it->second + "'");
  }
}

inline int to_int(const std::map<std::string, std::string>& kv, const std::string& key) {
  double v = to_number(kv, key);
  if (v != static_cast<int>(v)) throw FormatError("key '" + key + "' must be an integer");
  return static_cast<int>(v);
}

inline std::string full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace kv_detail

struct Preset {
  std::string name;
  FamilyKind family = FamilyKind::Charlier;
  double mu = 0.0;
  double gamma = 0.0;
  double lambda = 0.0;
  double alpha = 0.0;
  int j = 0;
  double qim_delta = 0.0;
  int coeff_index = 28;

  FamilyParams family_params() const {
    return family == FamilyKind::Charlier ? FamilyParams::charlier(mu)
                                          : FamilyParams::meixner(gamma, mu);
  }
  SobolevParams sobolev_params() const { return {alpha, lambda, j}; }
  QimConfig qim() const { return {qim_delta, coeff_index}; }

  void validate() const {
    family_params().validate();
    sobolev_params().validate();
    qim().validate(8);
  }

  std::string dump() const {
    std::ostringstream os;
    os << "name=" << name << "\n"
       << "family=" << (family == FamilyKind::Charlier ? "charlier" : "meixner") << "\n"
       << "mu=" << kv_detail::full(mu) << "\n";
    if (family == FamilyKind::Meixner) os << "gamma=" << kv_detail::full(gamma) << "\n";
    os << "lambda=" << kv_detail::full(lambda) << "\n"
       << "alpha=" << kv_detail::full(alpha) << "\n"
       << "j=" << j << "\n"
       << "qim_delta=" << kv_detail::full(qim_delta) << "\n"
       << "coeff_index=" << coeff_index << "\n";
    return os.str();
  }

  static Preset parse(const std::string& text) {
    auto kv = kv_detail::parse(text);
    Preset p;
    p.name = kv.count("name") ? kv["name"] : "custom";
    if (!kv.count("family")) throw FormatError("missing key 'family'");
    const std::string fam = kv["family"];
    if (fam == "charlier" || fam == "Charlier") {
      p.family = FamilyKind::Charlier;
    } else if (fam == "meixner" || fam == "Meixner") {
      p.family = FamilyKind::Meixner;
      p.gamma = kv_detail::to_number(kv, "gamma");
    } else {
      throw FormatError("family must be charlier or meixner, got '" + fam + "'");
    }
    p.mu = kv_detail::to_number(kv, "mu");
    p.lambda = kv_detail::to_number(kv, "lambda");
    p.alpha = kv_detail::to_number(kv, "alpha");
    p.j = kv_detail::to_int(kv, "j");
    p.qim_delta = kv_detail::to_number(kv, "qim_delta");
    if (kv.count("coeff_index")) p.coeff_index = kv_detail::to_int(kv, "coeff_index");
    try {
      p.validate();
    } catch (const ParameterError& e) {
      throw FormatError(std::string("invalid preset: ") + e.what());
    }
    return p;
  }
};

/// The four built-in presets; qim_delta is calibrated for a 37-42 dB PSNR.
inline const std::vector<Preset>& builtin_presets() {
  static const std::vector<Preset> presets = {
      {"CS_I", FamilyKind::Charlier, 0.0007, 0.0, 1e-47, -17.0, 5, 104.0, 28},
      {"CS_II", FamilyKind::Charlier, 0.0005, 0.0, 1e-77, -21.0, 3, 104.0, 28},
      {"MS_I", FamilyKind::Meixner, 0.0008, 0.000041, 1e-47, -17.0, 5, 96.0, 28},
      {"MS_II", FamilyKind::Meixner, 0.0001, 0.000075, 1e-77, -21.0, 3, 104.0, 28},
  };
  return presets;
}

inline std::string preset_names() {
  std::string s;
  for (const auto& p : builtin_presets()) s += (s.empty() ? "" : ", ") + p.name;
  return s;
}

/// A built-in name, or a path to a key=value preset file.
inline Preset load_preset(const std::string& name_or_path) {
  for (const auto& p : builtin_presets())
    if (p.name == name_or_path) return p;
  if (std::filesystem::is_regular_file(name_or_path))
    return Preset::parse(kv_detail::slurp(name_or_path));
  throw ParameterError("unknown preset '" + name_or_path + "' (available: " + preset_names() + ")");
}

/// Secret material: kappa for the fragile signature, (x0, mu_c) for scrambling.
struct KeyMaterial {
  std::string kappa;
  ChaosKey chaos;

  static KeyMaterial parse(const std::string& text) {
    auto kv = kv_detail::parse(text);
    KeyMaterial k;
    if (kv.count("kappa_hex")) {
      const std::string& h = kv["kappa_hex"];
      if (h.size() % 2) throw FormatError("kappa_hex must have an even number of digits");
      for (size_t i = 0; i < h.size(); i += 2) {
        try {
          size_t used = 0;
          int b = std::stoi(h.substr(i, 2), &used, 16);
          if (used != 2) throw std::invalid_argument("hex");
          k.kappa.push_back(static_cast<char>(b));
        } catch (const std::exception&) {
          throw FormatError("kappa_hex is not hexadecimal");
        }
      }
    } else if (kv.count("kappa")) {
      k.kappa = kv["kappa"];
    } else {
      throw FormatError("key file needs 'kappa' or 'kappa_hex'");
    }
    k.chaos.x0 = kv_detail::to_number(kv, "x0");
    k.chaos.mu_c = kv_detail::to_number(kv, "mu_c");
    return k;
  }

  static KeyMaterial load(const std::string& path) { return parse(kv_detail::slurp(path)); }

  std::string dump() const {
    static const char* hex = "0123456789abcdef";
    std::string h;
    for (unsigned char c : kappa) {
      h.push_back(hex[c >> 4]);
      h.push_back(hex[c & 15]);
    }
    return "kappa_hex=" + h + "\nx0=" + kv_detail::full(chaos.x0) +
           "\nmu_c=" + kv_detail::full(chaos.mu_c) + "\n";
  }
};

}  // namespace sobomark
