#include "walshreg/cli.hpp"

#include "walshreg/benchmark.hpp"
#include "walshreg/config.hpp"
#include "walshreg/errors.hpp"
#include "walshreg/io.hpp"
#include "walshreg/metrics.hpp"
#include "walshreg/registration.hpp"
#include "walshreg/synthetic.hpp"

#include <CLI11.hpp>

#include <array>
#include <filesystem>
#include <map>
#include <ostream>
#include <set>

namespace walshreg {

namespace {

namespace fs = std::filesystem;

constexpr std::array<const char*, 14> kSettingFlags = {
    "backend", "base", "ordering", "t-range", "s-range", "theta-range", "steps",
    "pyramid", "bins", "interp", "spacing", "workers", "seed", "out"};

struct Invocation {
  RunConfig cfg;
  std::set<std::string> explicit_keys;
  int synthetic = 0;
};

GrayImage input_image(const std::string& path, const Invocation& inv, int default_synthetic) {
  GrayImage img;
  if (!path.empty()) {
    img = load_image(path);
  } else {
    const int size = inv.synthetic > 0 ? inv.synthetic : default_synthetic;
    if (size <= 0) throw ConfigError("no input image given (pass a path or --synthetic N)");
    img = make_phantom(size, inv.cfg.seed);
  }
  img.spacing = inv.cfg.spacing;
  return img;
}

void ensure_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

int cmd_encode(const Invocation& inv, const std::string& path, std::ostream& out) {
  const RunConfig& cfg = inv.cfg;
  const GrayImage img = input_image(path, inv, 0);
  const DigitOrdering ordering = cfg.digit_ordering();
  const StructureCodeImage codes = encode_image(img, cfg.backend, cfg.base, ordering, cfg.workers);
  ensure_out_dir(cfg.out);
  save_code_visualization(codes, cfg.out / "codes.pgm");
  save_code_dump(codes, cfg.out / "codes.txt");
  out << "encoded " << img.width << "x" << img.height << " backend=" << to_string(cfg.backend)
      << " base=" << cfg.base << " ordering=" << to_string(ordering.tag) << " -> " << cfg.out.string()
      << "\n";
  return static_cast<int>(ExitCode::ok);
}

int cmd_register(const Invocation& inv, const std::string& ref_path, const std::string& mov_path,
                 std::ostream& out) {
  const RunConfig& cfg = inv.cfg;
  GrayImage reference = load_image(ref_path);
  GrayImage moving = load_image(mov_path);
  reference.spacing = moving.spacing = cfg.spacing;
  const RegistrationResult r = register_images(reference, moving, cfg.search_spec());

  ensure_out_dir(cfg.out);
  CsvTable report;
  report.header = {"t", "s", "theta", "score", "mi_after", "cc_after", "elapsed_seconds", "status", "error"};
  if (r.ok()) {
    const WarpResult registered = warp(moving, r.params, cfg.interp);
    save_image(registered.image, cfg.out / "registered.pgm");
    save_image(difference_image(reference, registered.image, registered.mask), cfg.out / "difference.pgm");
    report.rows.push_back({format_number(r.params.t), format_number(r.params.s),
                           format_number(r.params.theta), format_number(r.score),
                           format_number(r.mi_after), format_number(r.cc_after),
                           format_number(r.elapsed_seconds), "ok", ""});
  } else {
    report.rows.push_back({"", "", "", "", "", "", format_number(r.elapsed_seconds), "error",
                           r.error_kind ? std::string(to_string(*r.error_kind)) : ""});
  }
  write_text(cfg.out / "report.csv", report.str());
  out << report.str();
  return static_cast<int>(r.ok() ? ExitCode::ok : ExitCode::registration);
}

int cmd_metrics(const Invocation& inv, const std::string& a_path, const std::string& b_path,
                std::ostream& out) {
  const GrayImage a = load_image(a_path);
  const GrayImage b = load_image(b_path);
  if (a.width != b.width || a.height != b.height) throw DimensionError("images differ in size");
  const OverlapMask mask(a.width, a.height, true);
  const int bins = inv.cfg.bins;
  CsvTable t;
  t.header = {"mi", "cc", "entropy_a", "entropy_b"};
  t.rows.push_back({format_number(mutual_information(a, b, mask, bins)),
                    format_number(intensity_correlation(a, b, mask)),
                    format_number(entropy(a, mask, bins)), format_number(entropy(b, mask, bins))});
  out << t.str();
  return static_cast<int>(ExitCode::ok);
}

int cmd_diff(const Invocation& inv, const std::string& a_path, const std::string& b_path,
             std::ostream& out) {
  const GrayImage a = load_image(a_path);
  const GrayImage b = load_image(b_path);
  if (a.width != b.width || a.height != b.height) throw DimensionError("images differ in size");
  ensure_out_dir(inv.cfg.out);
  const fs::path target = inv.cfg.out / "difference.pgm";
  save_image(difference_image(a, b, OverlapMask(a.width, a.height, true)), target);
  out << "wrote " << target.string() << "\n";
  return static_cast<int>(ExitCode::ok);
}

int cmd_benchmark(const Invocation& inv, const std::string& image_path,
                  const std::string& perturbation_path, std::ostream& out) {
  const RunConfig& cfg = inv.cfg;
  const GrayImage reference = input_image(image_path, inv, 256);
  std::vector<Perturbation> perturbations;
  if (perturbation_path.empty()) {
    const auto p = protocol_perturbations();
    perturbations.assign(p.begin(), p.end());
  } else {
    perturbations = load_perturbations(perturbation_path);
  }
  std::vector<Backend> backends{Backend::walsh3, Backend::fwht4};
  if (inv.explicit_keys.count("backend") > 0) backends = {cfg.backend};

  const auto rows = run_registration_benchmark(reference, perturbations, backends, cfg.search_spec(),
                                               cfg.interp);
  const EncodingTiming timing = time_encoders(reference, cfg.base, 3, cfg.workers);

  ensure_out_dir(cfg.out);
  const CsvTable table = benchmark_table(rows);
  const CsvTable summary = summary_table(rows, timing);
  write_text(cfg.out / "benchmark.csv", table.str());
  write_text(cfg.out / "summary.csv", summary.str());
  out << table.str() << "\n" << summary.str();
  return static_cast<int>(ExitCode::ok);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rigid registration of gray images by structure-code correlation"};
  app.require_subcommand(1);
  app.fallthrough();

  std::map<std::string, std::string> settings;
  for (const char* name : kSettingFlags) {
    app.add_option(std::string("--") + name, settings[name], std::string("override the '") + name + "' setting");
  }
  std::string config_path;
  app.add_option("--config", config_path, "key=value settings file; flags override it");
  Invocation inv;
  app.add_option("--synthetic", inv.synthetic, "use a generated N x N test image instead of a file");

  std::string path_a;
  std::string path_b;
  std::string perturbation_path;
  auto* encode = app.add_subcommand("encode", "write the structure-code image (codes.pgm, codes.txt)");
  encode->add_option("image", path_a, "input PGM");
  auto* reg = app.add_subcommand("register", "register MOVING onto REFERENCE");
  reg->add_option("reference", path_a, "reference PGM")->required();
  reg->add_option("moving", path_b, "moving PGM")->required();
  auto* metrics = app.add_subcommand("metrics", "mutual information and correlation of two images");
  metrics->add_option("a", path_a, "first PGM")->required();
  metrics->add_option("b", path_b, "second PGM")->required();
  auto* diff = app.add_subcommand("diff", "absolute difference image");
  diff->add_option("a", path_a, "first PGM")->required();
  diff->add_option("b", path_b, "second PGM")->required();
  auto* bench = app.add_subcommand("benchmark", "register perturbed copies of an image");
  bench->add_option("image", path_a, "reference PGM (default: generated 256 x 256 image)");
  bench->add_option("--perturbations", perturbation_path, "x_mm,y_mm,angle lines");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::usage);
  }

  try {
    if (!config_path.empty()) {
      for (const auto& [key, value] : parse_key_values(read_text(config_path))) {
        try {
          apply_setting(inv.cfg, key, value);
        } catch (const ConfigError& e) {
          throw ConfigError(config_path + ": " + e.what());
        }
        inv.explicit_keys.insert(key);
      }
    }
    for (const char* name : kSettingFlags) {
      if (app.get_option(std::string("--") + name)->count() == 0) continue;
      apply_setting(inv.cfg, name, settings[name]);
      inv.explicit_keys.insert(name);
    }
    inv.cfg.validate();
    if (inv.synthetic < 0) throw ConfigError("--synthetic must be positive");

    if (*encode) return cmd_encode(inv, path_a, out);
    if (*reg) return cmd_register(inv, path_a, path_b, out);
    if (*metrics) return cmd_metrics(inv, path_a, path_b, out);
    if (*diff) return cmd_diff(inv, path_a, path_b, out);
    return cmd_benchmark(inv, path_a, perturbation_path, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::config);
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::config);
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::io);
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::io);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::input);
  } catch (const DimensionError& e) {
    err << "input error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::input);
  } catch (const MetricError& e) {
    err << "metric error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return static_cast<int>(ExitCode::metric);
  } catch (const EncodingError& e) {
    err << "encoding error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::encoding);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::internal);
  }
}

}  // namespace walshreg
