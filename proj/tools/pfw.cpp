// pfw: command-line front end for the filter library.
//
// Exit codes: 0 success, 1 verification failure, 2 input error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pfw/pfw.hpp"

namespace fs = std::filesystem;
using pfw::io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInput = 2;

// A matrix document, or any document carrying one under "matrix".
pfw::IntMatrix load_matrix(const std::string& path) {
  const json doc = pfw::io::read_json_file(path);
  if (doc.is_object() && !doc.contains("rows") && doc.contains("matrix"))
    return pfw::io::matrix_from_json(doc["matrix"], "matrix");
  return pfw::io::matrix_from_json(doc);
}

// A filter document, or the target filter embedded in a transfer report.
pfw::Filter load_filter(const std::string& path, bool* embedded = nullptr) {
  const json doc = pfw::io::read_json_file(path);
  const bool is_report = doc.is_object() && doc.contains("source") && doc.contains("target");
  if (embedded) *embedded = is_report;
  return is_report ? pfw::io::filter_from_json(doc["target"], "target") : pfw::io::filter_from_json(doc);
}

void emit(const json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << pfw::io::dump(doc);
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw pfw::Error(pfw::Errc::InvalidInput, "cannot write " + out_path);
  out << pfw::io::dump(doc);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw pfw::Error(pfw::Errc::InvalidInput, "cannot write " + path.string());
  out << text;
}

std::vector<pfw::Int> parse_point(const std::string& text) {
  std::vector<pfw::Int> coords;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      coords.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw pfw::Error(pfw::Errc::InvalidInput, "--point: '" + item + "' is not an integer");
    }
  }
  if (coords.empty()) throw pfw::Error(pfw::Errc::InvalidInput, "--point is empty");
  return coords;
}

int cmd_verify(const pfw::Config& cfg, const std::string& path, std::size_t samples, const std::string& out) {
  bool embedded = false;
  const pfw::Filter filter = load_filter(path, &embedded);
  if (filter.dropped_zeros() > 0)
    std::cerr << "warning: dropped " << filter.dropped_zeros() << " zero coefficient(s)\n";
  const pfw::ResidualReport report = pfw::lawton_residuals(filter);
  json doc = pfw::io::to_json(report, cfg.tolerance);
  const double qmf = pfw::qmf_check(filter, samples, pfw::kQmfSeed);
  doc["qmf"] = json{{"deviation", qmf}, {"samples", samples}, {"seed", pfw::kQmfSeed}};
  if (embedded) doc["checked"] = "target";
  emit(doc, out);
  std::cerr << "max_residual " << pfw::io::format_double(report.max_residual) << "  qmf_deviation "
            << pfw::io::format_double(qmf) << " (seed " << pfw::kQmfSeed << ")\n";
  return report.is_solution(cfg.tolerance) ? kExitOk : kExitVerifyFailed;
}

int cmd_cascade(const pfw::Config& cfg, const std::string& path, int levels, double tol) {
  if (levels < 0 || levels > cfg.cascade_level_cap) {
    throw pfw::Error(pfw::Errc::InvalidInput, "--levels must lie in [0, " + std::to_string(cfg.cascade_level_cap) + "]");
  }
  const pfw::Filter filter = load_filter(path);
  const pfw::CascadeRun run = pfw::run_cascade(filter, levels, tol, cfg.cell_budget);
  if (!run.filter_is_solution)
    std::cerr << "warning: filter does not solve its Lawton system, convergence is not guaranteed\n";

  std::cout << "level,cells,integral_re,integral_im,difference\n";
  for (std::size_t k = 0; k < run.integrals.size(); ++k) {
    std::cout << k << "," << run.cells[k]
              << "," << pfw::io::format_double(run.integrals[k].real()) << ","
              << pfw::io::format_double(run.integrals[k].imag()) << ","
              << (k == 0 ? "" : pfw::io::format_double(run.differences[k - 1])) << "\n";
  }

  const std::string stem = fs::path(path).stem().string() + "_K" + std::to_string(run.grid.level);
  const fs::path dir(cfg.output_dir);
  write_text(dir / (stem + ".csv"), pfw::io::grid_csv(run.grid));
  write_text(dir / (stem + ".json"), pfw::io::dump(pfw::io::grid_sidecar(run.grid)));
  if (run.grid.dim() == 1) write_text(dir / (stem + "_phi.csv"), pfw::io::phi_1d_csv(run.grid));
  std::cerr << "wrote " << (dir / (stem + ".csv")).string() << "\n";
  return kExitOk;
}

int cmd_pattern(const pfw::Config& cfg, std::int64_t width, bool write_csv) {
  const pfw::quincunx::PatternReport p = pfw::quincunx::support_pattern(width);
  const pfw::SupportSet support = pfw::quincunx::nonzero_support(p);
  const bool premise = pfw::quincunx::sublattice_premise(
      pfw::quincunx::shifted(support, pfw::LatticePoint{1, 0}), width - 1);
  json doc{{"half_width", width},
           {"min_odd_magnitude", p.min_odd_magnitude},
           {"max_even_magnitude", p.max_even_magnitude},
           {"odd_all_nonzero", p.odd_all_nonzero},
           {"even_all_vanish", p.even_all_vanish},
           {"threshold", pfw::quincunx::kZeroThreshold},
           {"shifted_sublattice_premise", premise}};
  std::cout << pfw::io::dump(doc);
  if (write_csv) {
    const fs::path file = fs::path(cfg.output_dir) / ("quincunx_pattern_W" + std::to_string(width) + ".csv");
    write_text(file, pfw::io::pattern_csv(p));
    std::cerr << "wrote " << file.string() << "\n";
  }
  return kExitOk;
}

int cmd_encode(int d, int n, const std::string& point_text) {
  const pfw::EncodingParams params(d, n);
  const pfw::LatticePoint p(parse_point(point_text));
  if (static_cast<int>(p.dim()) != d) {
    throw pfw::Error(pfw::Errc::DimensionMismatch,
                     "--point has " + std::to_string(p.dim()) + " coordinates, --d is " + std::to_string(d));
  }
  json doc{{"d", d}, {"N", n}, {"point", pfw::io::to_json(p)}, {"sigma", pfw::io::to_json(pfw::sigma(params, p))}};
  doc["f"] = d >= 2 ? pfw::io::to_json(pfw::f(params, p)) : pfw::io::to_json(p[0]);
  doc["theta"] = pfw::in_support_window(params, p) ? pfw::io::to_json(pfw::theta(params, p)) : json(nullptr);
  doc["eta"] = pfw::in_index_window(params, p) ? pfw::io::to_json(pfw::eta(params, p)) : json(nullptr);
  std::cout << pfw::io::dump(doc);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scaling filters under dyadic dilation matrices"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON file overriding the defaults")->check(CLI::ExistingFile);

  std::string input, target, out;
  auto* snf = app.add_subcommand("snf", "Smith normal form of a matrix");
  snf->add_option("matrix", input)->required();
  snf->add_option("-o,--output", out);

  auto* basis = app.add_subcommand("basis", "Adapted basis and coset representative");
  basis->add_option("matrix", input)->required();
  basis->add_option("-o,--output", out);

  auto* reduce = app.add_subcommand("reduce", "Reduced Lawton system of a filter");
  reduce->add_option("filter", input)->required();
  reduce->add_option("-o,--output", out);

  std::size_t samples = 256;
  auto* verify = app.add_subcommand("verify", "Lawton residuals of a filter (or of a report's target)");
  verify->add_option("filter", input)->required();
  verify->add_option("--samples", samples, "qmf check sample count")->capture_default_str();
  verify->add_option("-o,--output", out);

  auto* transfer = app.add_subcommand("transfer", "Transfer a filter to another dilation matrix");
  transfer->add_option("filter", input)->required();
  transfer->add_option("--target", target, "matrix JSON")->required();
  transfer->add_option("-o,--output", out);

  int levels = 0;
  double cascade_tol = 0.0;
  auto* cascade = app.add_subcommand("cascade", "Cascade iteration with convergence table");
  cascade->add_option("filter", input)->required();
  cascade->add_option("--levels", levels)->required();
  cascade->add_option("--tol", cascade_tol, "stop once a level difference drops below this")->capture_default_str();

  std::int64_t width = 3;
  bool pattern_csv = false;
  auto* quincunx = app.add_subcommand("quincunx", "Quincunx Shannon coefficients");
  quincunx->require_subcommand(1);
  auto* pattern = quincunx->add_subcommand("pattern", "Support pattern over [-W, W]^2");
  pattern->add_option("--width", width)->capture_default_str();
  pattern->add_flag("--csv", pattern_csv, "write m,n,s to the output directory");

  int enc_d = 2, enc_n = 1;
  std::string point;
  auto* encode = app.add_subcommand("encode", "Lattice encodings");
  encode->require_subcommand(1);
  auto* eval = encode->add_subcommand("eval", "sigma, f, theta, eta at a point");
  eval->add_option("--d", enc_d)->required();
  eval->add_option("--N", enc_n)->required();
  eval->add_option("--point", point, "comma separated coordinates")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    pfw::Config cfg;
    cfg.apply_environment();
    if (!config_path.empty()) cfg.merge(pfw::io::read_json_file(config_path));

    if (snf->parsed()) {
      emit(pfw::io::to_json(pfw::smith_normal_form(load_matrix(input))), out);
    } else if (basis->parsed()) {
      emit(pfw::io::basis_json(pfw::DilationMatrix(load_matrix(input))), out);
    } else if (reduce->parsed()) {
      const pfw::Filter filter = load_filter(input);
      emit(pfw::io::to_json(pfw::build_reduced_system(filter.support(), filter.matrix())), out);
    } else if (verify->parsed()) {
      return cmd_verify(cfg, input, samples, out);
    } else if (transfer->parsed()) {
      const pfw::TransferReport report = pfw::transfer(load_filter(input), pfw::DilationMatrix(load_matrix(target)));
      emit(pfw::io::to_json(report), out);
    } else if (cascade->parsed()) {
      return cmd_cascade(cfg, input, levels, cascade_tol);
    } else if (pattern->parsed()) {
      return cmd_pattern(cfg, width, pattern_csv);
    } else if (eval->parsed()) {
      return cmd_encode(enc_d, enc_n, point);
    }
    return kExitOk;
  } catch (const pfw::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::logic_error& e) {
    std::cerr << "internal check failed: " << e.what() << "\n";
    return kExitVerifyFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
