// sobomark: embed, extract, attack, evaluate and verify from the command line.
//
// Exit codes: 0 success, 1 verification failed, 2 usage or input error,
// 3 extracted image is not authentic.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sobomark/precise.hpp"
#include "sobomark/sobomark.hpp"

namespace fs = std::filesystem;
using namespace sobomark;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitError = 2;
constexpr int kExitInauthentic = 3;

std::string full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Options shared by the commands that touch a watermark.
struct SchemeOptions {
  std::string preset;
  std::string key_file;
  std::optional<double> x0;
  std::optional<double> chaos_mu;
  std::optional<double> delta;
  std::optional<int> coeff_index;
  std::string channels = "blue";

  void attach(CLI::App* cmd) {
    cmd->add_option("--preset", preset, "Built-in preset name or key=value preset file");
    cmd->add_option("--key-file", key_file, "Key file (kappa or kappa_hex, x0, mu_c)")->required();
    cmd->add_option("--x0", x0, "Override the chaotic seed x0");
    cmd->add_option("--chaos-mu", chaos_mu, "Override the chaotic control parameter mu_c");
    cmd->add_option("--delta", delta, "Override the quantization step");
    cmd->add_option("--coeff-index", coeff_index, "Override the zigzag coefficient index");
    cmd->add_option("--channels", channels, "Channels carrying robust bits")
        ->check(CLI::IsMember({"blue", "all"}));
  }
};

struct Scheme {
  Preset preset;
  KeyMaterial key;
  WatermarkConfig cfg;
  std::optional<MomentBasis> basis;
};

Preset resolve_preset(const std::string& name) {
  if (name.empty())
    throw ParameterError("no preset given (available: " + preset_names() + ")");
  return load_preset(name);
}

MomentBasis build_basis(const Preset& p) {
  SobolevFamily<double> sf(p.family_params(), p.sobolev_params());
  return MomentBasis::build(sf, 8);
}

Scheme make_scheme(const SchemeOptions& o) {
  Scheme s;
  s.preset = resolve_preset(o.preset);
  if (o.delta) s.preset.qim_delta = *o.delta;
  if (o.coeff_index) s.preset.coeff_index = *o.coeff_index;
  s.preset.validate();
  s.key = KeyMaterial::load(o.key_file);
  if (o.x0) s.key.chaos.x0 = *o.x0;
  if (o.chaos_mu) s.key.chaos.mu_c = *o.chaos_mu;
  s.key.chaos.validate();
  s.cfg.qim = s.preset.qim();
  s.cfg.channels = parse_channel_policy(o.channels);
  s.cfg.threads = default_threads();
  s.basis = build_basis(s.preset);
  return s;
}

void print_key(const Scheme& s) {
  std::cout << "preset: " << s.preset.name << "\n"
            << "delta: " << full(s.preset.qim_delta) << "\n"
            << "x0: " << full(s.key.chaos.x0) << "\n"
            << "mu_c: " << full(s.key.chaos.mu_c) << "\n";
}

nlohmann::json preset_json(const Preset& p) {
  return {{"name", p.name},
          {"family", p.family == FamilyKind::Charlier ? "charlier" : "meixner"},
          {"mu", p.mu},
          {"gamma", p.gamma},
          {"lambda", p.lambda},
          {"alpha", p.alpha},
          {"j", p.j},
          {"qim_delta", p.qim_delta},
          {"coeff_index", p.coeff_index}};
}

std::string sibling(const std::string& path, const std::string& suffix) {
  fs::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix)).string();
}

// -- embed ----------------------------------------------------------------------

int cmd_embed(const std::string& cover_path, const std::string& wm_path, const SchemeOptions& o,
              const std::string& out) {
  Scheme s = make_scheme(o);
  Image cover = read_image(cover_path);
  BitMatrix wm = read_watermark(wm_path);
  Image marked = embed(cover, wm, s.key.kappa, *s.basis, s.key.chaos, s.cfg);
  write_image(out, marked);
  const auto q = psnr(cover, marked);

  nlohmann::json side = {{"cover", cover_path},
                         {"watermark", wm_path},
                         {"output", out},
                         {"preset", preset_json(s.preset)},
                         {"delta", s.preset.qim_delta},
                         {"coeff_index", s.preset.coeff_index},
                         {"channels", to_string(s.cfg.channels)},
                         {"kappa_sha256", hex_digest(s.key.kappa)},
                         {"psnr_db", q.psnr_db}};
  std::ofstream(out + ".json") << side.dump(2) << "\n";

  print_key(s);
  std::cout << "psnr_db: " << std::setprecision(6) << q.psnr_db << "\n"
            << "wrote: " << out << "\n";
  return kExitOk;
}

// -- extract --------------------------------------------------------------------

int cmd_extract(const std::string& image_path, const SchemeOptions& o, const std::string& out,
                std::string tamper_out, const std::string& reference) {
  Scheme s = make_scheme(o);
  Image marked = read_image(image_path);
  ExtractResult r = extract(marked, *s.basis, s.key.chaos, s.cfg, s.key.kappa);
  write_watermark(out, r.robust);
  if (tamper_out.empty()) tamper_out = sibling(out, "_tamper.png");
  write_image(tamper_out, bits_to_image(r.tamper_map));  // flagged blocks are black

  print_key(s);
  std::cout << "authentic: " << (r.authentic ? "true" : "false") << "\n"
            << "tampered_blocks: " << r.tampered_blocks << "/" << r.tamper_map.size() << "\n";
  if (!reference.empty())
    std::cout << "ber: " << ber(read_watermark(reference), r.robust) << "\n";
  std::cout << "wrote: " << out << "\n"
            << "tamper_map: " << tamper_out << "\n";
  return r.authentic ? kExitOk : kExitInauthentic;
}

// -- attack ---------------------------------------------------------------------

int cmd_attack(const std::string& image_path, const std::string& name, double param,
               std::uint64_t seed, const std::string& out) {
  AttackSpec spec{parse_attack_kind(name), param, seed};
  if (!spec.in_grid())
    std::cerr << "warning: " << name << " parameter " << param << " is outside the sweep grid\n";
  Image img = read_image(image_path);
  write_image(out, apply_attack(img, spec));
  std::cout << "wrote: " << out << "\n";
  return kExitOk;
}

// -- evaluate -------------------------------------------------------------------

struct EvalRow {
  std::string image, preset, attack;
  double param = 0.0;
  double psnr_db = 0.0;
  double ber = 0.0;
  bool authentic = false;
};

std::vector<std::string> list_images(const std::string& dir) {
  if (!fs::is_directory(dir)) throw FormatError(dir + " is not a directory");
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext == ".png" || ext == ".bmp" || ext == ".ppm" || ext == ".pgm")
      out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw FormatError("no .png/.bmp/.ppm/.pgm images in " + dir);
  return out;
}

std::string csv_number(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

int cmd_evaluate(const std::string& dir, const std::string& wm_path, SchemeOptions o,
                 std::vector<std::string> presets, std::uint64_t seed, const std::string& csv) {
  if (presets.empty()) {
    if (o.preset.empty())
      throw ParameterError("no preset given (available: " + preset_names() + ")");
    presets.push_back(o.preset);
  }
  const auto images = list_images(dir);
  const BitMatrix wm = read_watermark(wm_path);

  std::vector<Scheme> schemes;
  for (const auto& p : presets) {
    o.preset = p;
    schemes.push_back(make_scheme(o));
    schemes.back().cfg.threads = 1;
  }

  const int jobs = static_cast<int>(images.size() * schemes.size());
  std::vector<std::vector<EvalRow>> rows(jobs);
  parallel_for(jobs, default_threads(), [&](int job) {
    const auto& path = images[job / schemes.size()];
    const Scheme& s = schemes[job % schemes.size()];
    const std::string name = fs::path(path).filename().string();
    Image cover = read_image(path);
    Image marked = embed(cover, wm, s.key.kappa, *s.basis, s.key.chaos, s.cfg);
    ExtractResult clean = extract(marked, *s.basis, s.key.chaos, s.cfg, s.key.kappa);
    rows[job].push_back({name, s.preset.name, "none", 0.0, psnr(cover, marked).psnr_db,
                         ber(wm, clean.robust), clean.authentic});
    for (AttackKind k : kAllAttacks)
      for (double param : attack_grid(k)) {
        Image attacked = apply_attack(marked, {k, param, seed});
        ExtractResult r = extract(attacked, *s.basis, s.key.chaos, s.cfg, s.key.kappa);
        rows[job].push_back({name, s.preset.name, to_string(k), param,
                             psnr(cover, attacked).psnr_db, ber(wm, r.robust), r.authentic});
      }
  });

  std::ofstream out(csv);
  if (!out) throw FormatError("cannot write " + csv);
  out << "image,preset,attack,param,psnr_db,ber,authentic\n";
  for (const auto& job : rows)
    for (const auto& r : job)
      out << r.image << "," << r.preset << "," << r.attack << "," << csv_number(r.param) << ","
          << csv_number(r.psnr_db) << "," << csv_number(r.ber) << ","
          << (r.authentic ? "true" : "false") << "\n";
  std::cout << "images: " << images.size() << "\npresets: " << schemes.size() << "\nwrote: " << csv
            << "\n";
  return kExitOk;
}

// -- verify ---------------------------------------------------------------------

struct VerifyOptions {
  std::string preset;
  std::string family;
  std::optional<double> mu, gamma, lambda, alpha;
  std::optional<int> j;
  int n_max = 8;
  int x_min = 0;
  int x_max = 20;
  double tol = 1e-9;
};

int cmd_verify(const VerifyOptions& o) {
  Preset p;
  if (!o.preset.empty()) {
    p = load_preset(o.preset);
  } else if (!o.family.empty()) {
    p.name = "custom";
    p.qim_delta = 1.0;
  } else {
    throw ParameterError("give --preset or --family (available presets: " + preset_names() + ")");
  }
  if (!o.family.empty()) {
    if (o.family == "charlier") p.family = FamilyKind::Charlier;
    else if (o.family == "meixner") p.family = FamilyKind::Meixner;
    else throw ParameterError("family must be charlier or meixner");
  }
  if (o.mu) p.mu = *o.mu;
  if (o.gamma) p.gamma = *o.gamma;
  if (o.lambda) p.lambda = *o.lambda;
  if (o.alpha) p.alpha = *o.alpha;
  if (o.j) p.j = *o.j;
  p.family_params().validate();
  p.sobolev_params().validate();
  if (o.n_max < 1 || o.x_max < o.x_min) throw ParameterError("empty verification grid");

  SobolevFamily<Precise> sf(p.family_params(), p.sobolev_params(), std::max(16, o.n_max + 2));
  SuiteConfig cfg{1, o.n_max, o.x_min, o.x_max, o.tol};
  std::cout << "family: " << p.family_params().describe() << "\n"
            << "alpha: " << full(p.alpha) << "  lambda: " << full(p.lambda) << "  j: " << p.j << "\n"
            << "grid: n=1.." << o.n_max << ", x=" << o.x_min << ".." << o.x_max
            << ", tolerance " << o.tol << " x scale\n";
  bool ok = true;
  for (const auto& st : run_identity_suite(sf, cfg)) {
    ok = ok && st.passed;
    std::cout << (st.passed ? "ok   " : "FAIL ") << std::left << std::setw(28) << st.name
              << " max_rel=" << std::setprecision(3) << std::scientific << st.max_relative
              << std::defaultfloat << "  points=" << st.evaluated << "  singular=" << st.skipped
              << "  vanishing=" << st.vacuous << "\n";
  }
  std::cout << (ok ? "all identities hold\n" : "some identities FAILED\n");
  return ok ? kExitOk : kExitVerifyFailed;
}

// -- basis dump -----------------------------------------------------------------

int cmd_basis_dump(const std::string& preset, int n, const std::string& out) {
  Preset p = resolve_preset(preset);
  SobolevFamily<double> sf(p.family_params(), p.sobolev_params());
  MomentBasis b = MomentBasis::build(sf, n);
  std::ostringstream os;
  os << "x";
  for (int k = 0; k < n; ++k) os << ",S" << k;
  os << "\n" << std::setprecision(17);
  for (int x = 0; x < n; ++x) {
    os << x;
    for (int k = 0; k < n; ++k) os << "," << b(x, k);
    os << "\n";
  }
  if (out.empty() || out == "-") {
    std::cout << os.str();
  } else {
    std::ofstream(out) << os.str();
    std::cout << "orthonormality_defect: " << b.orthonormality_defect() << "\nwrote: " << out
              << "\n";
  }
  return kExitOk;
}

// -- presets / synth ------------------------------------------------------------

int cmd_presets(const std::string& dump) {
  if (dump.empty()) {
    for (const auto& p : builtin_presets())
      std::cout << p.name << "  " << p.family_params().describe() << " lambda=" << p.lambda
                << " alpha=" << p.alpha << " j=" << p.j << " delta=" << p.qim_delta << "\n";
    return kExitOk;
  }
  std::cout << load_preset(dump).dump();
  return kExitOk;
}

int cmd_synth(const std::string& dir, int count) {
  if (count < 1 || count > static_cast<int>(synthetic_cover_names().size()))
    throw ParameterError("count must lie in 1.." + std::to_string(synthetic_cover_names().size()));
  fs::create_directories(dir);
  for (int i = 0; i < count; ++i) {
    const std::string path = (fs::path(dir) / (synthetic_cover_names()[i] + ".png")).string();
    write_image(path, synthetic_cover(i));
    std::cout << "wrote: " << path << "\n";
  }
  const std::string wm = (fs::path(dir) / "watermark.pbm").string();
  write_watermark(wm, synthetic_watermark());
  std::cout << "wrote: " << wm << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sobolev-moment dual watermarking"};
  app.require_subcommand(1);

  // embed
  auto* embed_cmd = app.add_subcommand("embed", "Embed a 64x64 watermark into a cover image");
  std::string cover, watermark, out;
  SchemeOptions embed_opts;
  embed_cmd->add_option("cover", cover, "Cover image (PNG/BMP/PNM)")->required();
  embed_cmd->add_option("watermark", watermark, "64x64 watermark (PBM/PNG/raw)")->required();
  embed_opts.attach(embed_cmd);
  embed_cmd->add_option("--out", out, "Watermarked image (.png or .bmp)")->required();

  // extract
  auto* extract_cmd = app.add_subcommand("extract", "Recover the watermark and check integrity");
  std::string marked, tamper, reference;
  SchemeOptions extract_opts;
  extract_cmd->add_option("image", marked, "Watermarked image")->required();
  extract_opts.attach(extract_cmd);
  extract_cmd->add_option("--out", out, "Recovered watermark (.pbm, .png, .raw)")->required();
  extract_cmd->add_option("--tamper-map", tamper, "Tamper map image (default <out>_tamper.png)");
  extract_cmd->add_option("--reference", reference, "Original watermark; prints the BER");

  // attack
  auto* attack_cmd = app.add_subcommand("attack", "Apply one attack to an image");
  std::string attack_image, attack_name;
  double attack_param = 0.0;
  std::uint64_t seed = 1;
  attack_cmd->add_option("image", attack_image, "Input image")->required();
  attack_cmd->add_option("attack", attack_name,
                         "cropping | fourier-ellipsoid | gaussian | gaussian-laplace | "
                         "minimum-filter | salt-pepper")
      ->required();
  attack_cmd->add_option("param", attack_param, "Attack parameter")->required();
  attack_cmd->add_option("--seed", seed, "Random seed for stochastic attacks");
  attack_cmd->add_option("--out", out, "Output image")->required();

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "Embed, attack and extract over a directory");
  std::string cover_dir, csv;
  std::vector<std::string> eval_presets;
  SchemeOptions eval_opts;
  eval_cmd->add_option("covers", cover_dir, "Directory of cover images")->required();
  eval_cmd->add_option("--watermark", watermark, "64x64 watermark")->required();
  eval_opts.attach(eval_cmd);
  eval_cmd->add_option("--presets", eval_presets, "Several presets (overrides --preset)");
  eval_cmd->add_option("--seed", seed, "Seed for salt-pepper");
  eval_cmd->add_option("--csv", csv, "Output CSV")->required();

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Check the polynomial identities in high precision");
  VerifyOptions vo;
  verify_cmd->add_option("--preset", vo.preset, "Preset name or file");
  verify_cmd->add_option("--family", vo.family, "charlier or meixner (custom parameters)");
  verify_cmd->add_option("--mu", vo.mu);
  verify_cmd->add_option("--gamma", vo.gamma);
  verify_cmd->add_option("--lambda", vo.lambda);
  verify_cmd->add_option("--alpha", vo.alpha);
  verify_cmd->add_option("--j", vo.j);
  verify_cmd->add_option("--n-max", vo.n_max, "Largest degree checked");
  verify_cmd->add_option("--x-min", vo.x_min);
  verify_cmd->add_option("--x-max", vo.x_max);
  verify_cmd->add_option("--tol", vo.tol, "Relative tolerance");

  // basis dump
  auto* basis_cmd = app.add_subcommand("basis", "Moment basis diagnostics");
  auto* dump_cmd = basis_cmd->add_subcommand("dump", "Write the basis matrix as CSV");
  basis_cmd->require_subcommand(1);
  std::string basis_preset;
  int basis_n = 8;
  dump_cmd->add_option("--preset", basis_preset, "Preset name or file")->required();
  dump_cmd->add_option("--n", basis_n, "Block size");
  dump_cmd->add_option("--out", out, "CSV path (default stdout)");

  // presets
  auto* presets_cmd = app.add_subcommand("presets", "List or dump presets");
  std::string dump_name;
  presets_cmd->add_option("--dump", dump_name, "Print one preset as key=value text");

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Write synthetic covers and a test watermark");
  std::string synth_dir;
  int synth_count = 4;
  synth_cmd->add_option("--out", synth_dir, "Output directory")->required();
  synth_cmd->add_option("--count", synth_count, "Number of covers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*embed_cmd) return cmd_embed(cover, watermark, embed_opts, out);
    if (*extract_cmd) return cmd_extract(marked, extract_opts, out, tamper, reference);
    if (*attack_cmd) return cmd_attack(attack_image, attack_name, attack_param, seed, out);
    if (*eval_cmd) return cmd_evaluate(cover_dir, watermark, eval_opts, eval_presets, seed, csv);
    if (*verify_cmd) return cmd_verify(vo);
    if (*dump_cmd) return cmd_basis_dump(basis_preset, basis_n, out);
    if (*presets_cmd) return cmd_presets(dump_name);
    if (*synth_cmd) return cmd_synth(synth_dir, synth_count);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
