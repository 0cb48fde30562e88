// nlab: command-line front end for the nodal-domain laboratory.
//
// Subcommands: eigs, pleijel, optimize, pack. Every run writes its outputs
// into one run directory (timestamped under --out, or exactly --run-dir)
// together with a manifest.json. All floating-point output is formatted with
// 17 significant digits, so reruns with identical inputs produce
// byte-identical result files; manifest.json records wall time and is the
// documented exception.
//
// Exit codes: 0 success, 1 computation failure, 2 usage error.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "nlab/geometry.hpp"
#include "nlab/io.hpp"
#include "nlab/nodal.hpp"
#include "nlab/packing.hpp"
#include "nlab/pleijel.hpp"
#include "nlab/spectral.hpp"
#include "nlab/util.hpp"

namespace fs = std::filesystem;
using nlab::Json;
using nlab::JsonArray;
using nlab::JsonObject;

namespace {

constexpr const char* kVersion = "0.1.0";

struct RunContext {
  fs::path dir;
  std::string command;
  JsonObject config;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point t0 =
      std::chrono::steady_clock::now();

  fs::path out(const std::string& name) {
    outputs.push_back(name);
    return dir / name;
  }
  void cfg(const std::string& key, Json value) {
    config.emplace_back(key, std::move(value));
  }
  void finish() {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    JsonArray outs;
    for (const std::string& o : outputs) outs.emplace_back(o);
    write_json_file((dir / "manifest.json").string(),
                    Json(JsonObject{
                        {"command", command},
                        {"config", config},
                        {"versions",
                         JsonObject{{"nlab", kVersion},
                                    {"eigen", std::to_string(EIGEN_WORLD_VERSION) +
                                                  "." +
                                                  std::to_string(
                                                      EIGEN_MAJOR_VERSION) +
                                                  "." +
                                                  std::to_string(
                                                      EIGEN_MINOR_VERSION)},
                                    {"cli11", CLI11_VERSION}}},
                        {"outputs", outs},
                        {"wall_time_s", wall},
                    }));
  }
};

RunContext make_run_context(const std::string& command,
                            const std::string& out_parent,
                            const std::string& run_dir) {
  RunContext ctx;
  ctx.command = command;
  if (!run_dir.empty()) {
    ctx.dir = run_dir;
  } else {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y%m%d-%H%M%S", &tm);
    fs::path base = fs::path(out_parent) / ("nlab-run-" + std::string(stamp));
    fs::path candidate = base;
    for (int suffix = 2; fs::exists(candidate); ++suffix)
      candidate = base.string() + "-" + std::to_string(suffix);
    ctx.dir = candidate;
  }
  fs::create_directories(ctx.dir);
  return ctx;
}

std::string zero_padded(int v, int width) {
  std::string s = std::to_string(v);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

// --- eigs ---------------------------------------------------------------------

struct EigsArgs {
  std::string shape;
  double h = 0;
  int k = 0;
  double tol = 1e-9;
  bool dump_pgm = false;
  bool pgm_ascii = false;
  bool no_vectors = false;
};

void cmd_eigs(const EigsArgs& a, RunContext& ctx) {
  ctx.cfg("shape", a.shape);
  ctx.cfg("h", a.h);
  ctx.cfg("k", a.k);
  ctx.cfg("tol", a.tol);
  ctx.cfg("dump_pgm", a.dump_pgm);
  ctx.cfg("write_vectors", !a.no_vectors);

  const nlab::Shape shape = nlab::Shape::parse(a.shape);
  const nlab::DomainGrid grid = nlab::rasterize(shape, a.h);
  const nlab::DirichletOperator op = nlab::assemble_dirichlet_laplacian(grid);
  const std::vector<nlab::EigenPair> pairs =
      nlab::smallest_eigenpairs(op, a.k, a.tol);

  std::vector<std::vector<double>> rows;
  rows.reserve(pairs.size());
  for (const nlab::EigenPair& p : pairs)
    rows.push_back({static_cast<double>(p.index), p.lambda});
  nlab::write_csv(ctx.out("eigenvalues.csv").string(), "index,lambda", rows);

  if (!a.no_vectors) {
    for (const nlab::EigenPair& p : pairs) {
      const std::vector<double> field = nlab::scatter_to_grid(op, p.vector);
      nlab::write_field_binary(
          ctx.out("eigvec_" + zero_padded(p.index, 4) + ".bin").string(),
          field, static_cast<std::uint32_t>(grid.rows),
          static_cast<std::uint32_t>(grid.cols));
    }
  }
  if (a.dump_pgm)
    nlab::write_pgm(ctx.out("mask.pgm").string(), grid.to_pgm_pixels(),
                    grid.rows, grid.cols, !a.pgm_ascii);
  std::cout << "eigs: " << pairs.size() << " pairs, lambda_1 = "
            << nlab::format_double(pairs.front().lambda) << "\n";
}

// --- optimize -----------------------------------------------------------------

struct OptimizeArgs {
  double p = nlab::kBlindRatio;
  double tol = 1e-10;
  std::string scan_out;  // file name inside the run dir; empty = no scan
};

void cmd_optimize(const OptimizeArgs& a, RunContext& ctx) {
  ctx.cfg("p", a.p);
  ctx.cfg("tol", a.tol);
  if (!a.scan_out.empty()) ctx.cfg("scan_out", a.scan_out);

  const double j = nlab::j0_first_zero();
  const nlab::GainOptimum opt = nlab::optimize_gain(a.p, j, a.tol);
  const double classical = (2.0 / j) * (2.0 / j);
  write_json_file(
      ctx.out("optimize.json").string(),
      Json(JsonObject{{"delta_star", opt.delta_star},
                      {"gain_star", opt.gain_star},
                      {"pleijel_classical", classical},
                      {"improved_constant", classical - opt.gain_star},
                      {"constraint_35",
                       nlab::check_constraint_35(opt.delta_star, a.p)}}));
  if (!a.scan_out.empty()) {
    std::vector<std::vector<double>> rows;
    for (const auto& [d, g] : nlab::scan_gain(a.p, j))
      rows.push_back({d, g});
    nlab::write_csv(ctx.out(a.scan_out).string(), "delta,gain", rows);
  }
  std::cout << "pleijel_classical = " << nlab::format_double(classical)
            << "\ngain_star = " << nlab::format_double(opt.gain_star)
            << " at delta_star = " << nlab::format_double(opt.delta_star)
            << "\nimproved_constant = "
            << nlab::format_double(classical - opt.gain_star) << "\n";
}

// --- pleijel ------------------------------------------------------------------

struct PleijelArgs {
  std::string shape;
  double h = 0;
  int n_max = 0;
  double delta = -1;  // < 0: use the optimizer's delta_star
  double p = nlab::kBlindRatio;
  double zero_tol = 1e-6;
  double tol = 1e-10;
  bool oracle = false;
  bool dump_pgm = false;
  bool pgm_ascii = false;
};

Json summary_json(const nlab::PleijelSequence& seq, int n_max, double j) {
  const int window_lo = std::max(1, n_max / 2);
  double window_max = 0;
  double tail_max = 0;
  bool tail_any = false;
  for (const nlab::PleijelEntry& e : seq.entries) {
    if (e.n >= window_lo) window_max = std::max(window_max, e.ratio);
    if (e.n >= 1000) {
      tail_max = std::max(tail_max, e.ratio);
      tail_any = true;
    }
  }
  JsonArray skipped;
  for (const nlab::SkippedMode& s : seq.skipped)
    skipped.push_back(JsonObject{{"n", s.n}, {"lambda", s.lambda}});
  JsonObject summary{
      {"n_max", n_max},
      {"extracted", static_cast<std::int64_t>(seq.entries.size())},
      {"window", JsonArray{window_lo, n_max}},
      {"window_max_ratio", window_max},
      {"tail_from", 1000},
      {"tail_max_ratio", tail_any ? Json(tail_max) : Json(nullptr)},
      {"two_over_pi", 2.0 / std::numbers::pi},
      {"pleijel_classical", (2.0 / j) * (2.0 / j)},
      {"skipped", skipped},
  };
  return Json(std::move(summary));
}

void cmd_pleijel(const PleijelArgs& a, RunContext& ctx) {
  const double j = nlab::j0_first_zero();
  const double delta =
      a.delta >= 0 ? a.delta
                   : nlab::optimize_gain(a.p, j, 1e-10).delta_star;
  ctx.cfg("shape", a.shape);
  if (!a.oracle) ctx.cfg("h", a.h);
  ctx.cfg("n_max", a.n_max);
  ctx.cfg("delta", delta);
  ctx.cfg("p", a.p);
  ctx.cfg("oracle", a.oracle);
  if (!a.oracle) {
    ctx.cfg("zero_tol", a.zero_tol);
    ctx.cfg("tol", a.tol);
  }

  const nlab::Shape shape = nlab::Shape::parse(a.shape);

  if (a.oracle) {
    // Closed-form counts, no PDE solve: rectangles only.
    const auto [sa, sb] = shape.rectangle_sides();
    const nlab::PleijelSequence seq =
        nlab::rectangle_pleijel_sequence(sa, sb, a.n_max);
    std::vector<std::vector<double>> rows;
    for (const nlab::PleijelEntry& e : seq.entries)
      rows.push_back({static_cast<double>(e.n), e.lambda,
                      static_cast<double>(e.count), e.ratio});
    nlab::write_csv(ctx.out("sequence.csv").string(), "n,lambda,N,ratio",
                    rows);
    write_json_file(ctx.out("summary.json").string(),
                    summary_json(seq, a.n_max, j));
    std::cout << "pleijel (oracle): " << seq.entries.size() << " modes\n";
    return;
  }

  const nlab::DomainGrid grid = nlab::rasterize(shape, a.h);
  const nlab::DirichletOperator op = nlab::assemble_dirichlet_laplacian(grid);
  const int k = static_cast<int>(std::min<std::int64_t>(
      op.dim(), static_cast<std::int64_t>(a.n_max) + 8));
  const std::vector<nlab::EigenPair> pairs =
      nlab::smallest_eigenpairs(op, k, a.tol);
  std::vector<double> lambdas(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) lambdas[i] = pairs[i].lambda;
  const std::vector<int> cluster = nlab::degenerate_clusters(lambdas);
  std::vector<int> cluster_size(cluster.empty() ? 0 : cluster.back() + 1, 0);
  for (int c : cluster) ++cluster_size[static_cast<std::size_t>(c)];

  const double omega_area = grid.area();
  nlab::PleijelSequence seq;
  JsonArray bound_reports;
  const int n_have = std::min(a.n_max, k);
  for (int i = 0; i < n_have; ++i) {
    const int n = i + 1;
    const double lambda = pairs[static_cast<std::size_t>(i)].lambda;
    if (cluster_size[static_cast<std::size_t>(
            cluster[static_cast<std::size_t>(i)])] > 1) {
      seq.skipped.push_back({n, lambda});
      continue;
    }
    const nlab::NodalDecomposition nd = nlab::extract_nodal_domains(
        grid, op, pairs[static_cast<std::size_t>(i)], a.zero_tol);
    seq.entries.push_back(
        {n, lambda, nd.count(), static_cast<double>(nd.count()) / n});

    const nlab::PleijelParams params = nlab::make_params(delta, lambda, a.p, j);
    std::vector<nlab::ClassifiedDomain> classified;
    classified.reserve(nd.domains.size());
    nlab::NodalDecomposition class_iii = nd;
    class_iii.domains.clear();
    double measure_sum = 0;
    for (const nlab::NodalDomain& dom : nd.domains) {
      const nlab::DomainClass cls = nlab::classify(dom.metrics, params);
      classified.push_back({dom.metrics, cls});
      if (cls == nlab::DomainClass::III) {
        class_iii.domains.push_back(dom);
        measure_sum +=
            std::numbers::pi * dom.metrics.r_i * dom.metrics.r_i;
      }
    }
    const nlab::VacuityReport vac =
        nlab::class_iv_vacuity_check(classified, lambda, j);
    const nlab::BoundReport rep = nlab::aggregate_bound(
        classified, lambda, omega_area, delta, a.p, j, n);
    bool discs_ok = true;
    if (!class_iii.domains.empty()) {
      const nlab::DiscPacking discs =
          nlab::inscribed_disc_packing(grid, class_iii);
      discs_ok = nlab::verify_packing(discs).ok;
    }
    bound_reports.push_back(JsonObject{
        {"n", rep.n},
        {"lambda_n", rep.lambda_n},
        {"N", rep.N},
        {"N_I", rep.N_I},
        {"N_II", rep.N_II},
        {"N_III", rep.N_III},
        {"N_IV", rep.N_IV},
        {"lhs", rep.lhs},
        {"rhs_classical", rep.rhs_classical},
        {"rhs_refined", rep.rhs_refined},
        {"rhs_merged", rep.rhs_merged},
        {"constraint_35_ok", rep.constraint_35_ok},
        {"class_iv_vacuity_ok", vac.ok},
        {"class_iii_empty", rep.N_III == 0},  // legitimate per the paper
        {"class_iii_packing_measure", measure_sum / omega_area},
        {"hex_density_reference", std::numbers::pi / std::sqrt(12.0)},
        {"class_iii_discs_verified", discs_ok},
    });
  }

  std::vector<std::vector<double>> rows;
  for (const nlab::PleijelEntry& e : seq.entries)
    rows.push_back({static_cast<double>(e.n), e.lambda,
                    static_cast<double>(e.count), e.ratio});
  nlab::write_csv(ctx.out("sequence.csv").string(), "n,lambda,N,ratio", rows);
  write_json_file(ctx.out("bounds.json").string(), Json(bound_reports));
  write_json_file(ctx.out("summary.json").string(),
                  summary_json(seq, a.n_max, j));
  if (a.dump_pgm)
    nlab::write_pgm(ctx.out("mask.pgm").string(), grid.to_pgm_pixels(),
                    grid.rows, grid.cols, !a.pgm_ascii);
  std::cout << "pleijel: " << seq.entries.size() << " modes extracted, "
            << seq.skipped.size() << " degenerate modes skipped\n";
}

// --- pack ---------------------------------------------------------------------

struct PackArgs {
  std::string lattice;  // "hex" | "square"
  bool greedy = false;
  std::string load;
  std::string torus = "20x20";
  double r = 1.0;
  std::string radii = "1:1";
  std::int64_t attempts = 10000;
  std::uint64_t seed = 1;
  double p = nlab::kBlindRatio;
};

nlab::Torus parse_torus(const std::string& s) {
  const std::size_t x = s.find('x');
  if (x == std::string::npos)
    throw std::invalid_argument("--torus expects LXxLY, e.g. 20x20");
  char* end = nullptr;
  const double lx = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + x)
    throw std::invalid_argument("--torus expects LXxLY, e.g. 20x20");
  const double ly = std::strtod(s.c_str() + x + 1, &end);
  if (*end != '\0' || !(lx > 0) || !(ly > 0))
    throw std::invalid_argument("--torus expects positive LXxLY");
  return {lx, ly};
}

void cmd_pack(const PackArgs& a, RunContext& ctx) {
  const int modes = (!a.lattice.empty() ? 1 : 0) + (a.greedy ? 1 : 0) +
                    (!a.load.empty() ? 1 : 0);
  if (modes != 1)
    throw std::invalid_argument(
        "pack: choose exactly one of --lattice, --greedy, --load");

  nlab::DiscPacking packing;
  JsonObject sidecar;
  if (!a.lattice.empty()) {
    const nlab::Torus want = parse_torus(a.torus);
    ctx.cfg("lattice", a.lattice);
    ctx.cfg("torus", a.torus);
    ctx.cfg("r", a.r);
    if (a.lattice == "hex") {
      // Snap to the nearest commensurate torus; a hexagonal lattice is
      // periodic only for Lx = 2kr, Ly = 2*sqrt(3)*m*r.
      const int k = std::max<int>(
          1, static_cast<int>(std::llround(want.Lx / (2 * a.r))));
      const int m = std::max<int>(
          1, static_cast<int>(std::llround(
                 want.Ly / (2 * std::sqrt(3.0) * a.r))));
      packing = nlab::hexagonal_lattice(k, m, a.r);
    } else if (a.lattice == "square") {
      const int k = std::max<int>(
          1, static_cast<int>(std::llround(want.Lx / (2 * a.r))));
      const int m = std::max<int>(
          1, static_cast<int>(std::llround(want.Ly / (2 * a.r))));
      packing = nlab::square_lattice(k, m, a.r);
    } else {
      throw std::invalid_argument("--lattice must be hex or square");
    }
    sidecar.emplace_back("kind", "lattice:" + a.lattice);
    sidecar.emplace_back("requested_torus",
                         JsonArray{want.Lx, want.Ly});
    sidecar.emplace_back(
        "torus", JsonArray{packing.torus->Lx, packing.torus->Ly});
    sidecar.emplace_back("r", a.r);
  } else if (a.greedy) {
    const nlab::Torus torus = parse_torus(a.torus);
    const std::size_t colon = a.radii.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("--radii expects LO:HI, e.g. 0.75:1");
    nlab::RadiiLaw law;
    law.r_lo = std::strtod(a.radii.substr(0, colon).c_str(), nullptr);
    law.r_hi = std::strtod(a.radii.substr(colon + 1).c_str(), nullptr);
    ctx.cfg("torus", a.torus);
    ctx.cfg("radii", a.radii);
    ctx.cfg("attempts", a.attempts);
    ctx.cfg("seed", static_cast<std::int64_t>(a.seed));
    packing = nlab::greedy_pack(torus, law, a.attempts, a.seed);
    sidecar.emplace_back("kind", "greedy");
    sidecar.emplace_back("torus", JsonArray{torus.Lx, torus.Ly});
    sidecar.emplace_back("radii_law", JsonArray{law.r_lo, law.r_hi});
    sidecar.emplace_back("attempts", a.attempts);
    sidecar.emplace_back("seed", static_cast<std::int64_t>(a.seed));
  } else {
    ctx.cfg("load", a.load);
    packing = nlab::load_packing_csv(a.load);
    sidecar.emplace_back("kind", "loaded");
    sidecar.emplace_back("source", a.load);
    sidecar.emplace_back(
        "torus", JsonArray{packing.torus->Lx, packing.torus->Ly});
  }
  ctx.cfg("p", a.p);
  sidecar.emplace_back("count",
                       static_cast<std::int64_t>(packing.discs.size()));

  const nlab::PackingViolation v = nlab::verify_packing(packing);
  if (!v.ok)
    throw std::runtime_error(
        "packing invalid: " + v.kind + " at discs (" + std::to_string(v.i) +
        ", " + std::to_string(v.j) + "), dist " + nlab::format_double(v.dist) +
        " < required " + nlab::format_double(v.required));

  const nlab::BlindReport rep = nlab::blind_bound_check(packing, a.p);
  nlab::save_packing_csv(ctx.out("packing.csv").string(), packing);
  write_json_file(ctx.out("packing.json").string(), Json(std::move(sidecar)));
  write_json_file(
      ctx.out("blind.json").string(),
      Json(JsonObject{{"ratio", rep.ratio},
                      {"density", rep.density},
                      {"hypothesis_met", rep.hypothesis_met},
                      {"bound_respected", rep.bound_respected},
                      {"p", a.p},
                      {"pi_over_sqrt12",
                       std::numbers::pi / std::sqrt(12.0)}}));
  std::cout << "pack: " << packing.discs.size() << " discs, density = "
            << nlab::format_double(rep.density) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nlab: numerical laboratory for nodal-domain bounds"};
  app.require_subcommand(1);
  // --h is a real option (grid spacing), so help stays long-form only.
  app.set_help_flag("--help", "print help");
  app.set_config("--config", "",
                 "key=value config file (INI sections per subcommand); "
                 "command-line flags take precedence");

  std::string out_parent = ".";
  std::string run_dir;
  app.add_option("--out", out_parent,
                 "parent directory for the timestamped run directory")
      ->capture_default_str();
  app.add_option("--run-dir", run_dir,
                 "exact run directory (overrides --out; no timestamp)");

  EigsArgs eigs;
  CLI::App* c_eigs =
      app.add_subcommand("eigs", "solve the smallest Dirichlet eigenpairs");
  c_eigs->set_help_flag("--help", "print help");
  c_eigs->add_option("--shape", eigs.shape, "shape descriptor")->required();
  c_eigs->add_option("--h", eigs.h, "grid spacing")->required();
  c_eigs->add_option("--k", eigs.k, "number of eigenpairs")->required();
  c_eigs->add_option("--tol", eigs.tol, "relative residual tolerance")
      ->capture_default_str();
  c_eigs->add_flag("--dump-pgm", eigs.dump_pgm, "write the interior mask PGM");
  c_eigs->add_flag("--pgm-ascii", eigs.pgm_ascii, "use ASCII P2 instead of P5");
  c_eigs->add_flag("--no-vectors", eigs.no_vectors,
                   "skip eigenvector binaries");

  PleijelArgs pl;
  CLI::App* c_pl = app.add_subcommand(
      "pleijel", "nodal counts, class partition and Eq. (31) reports");
  c_pl->set_help_flag("--help", "print help");
  c_pl->add_option("--shape", pl.shape, "shape descriptor")->required();
  c_pl->add_option("--h", pl.h, "grid spacing (solved variant)");
  c_pl->add_option("--n-max", pl.n_max, "number of modes")->required();
  c_pl->add_option("--delta", pl.delta,
                   "class threshold delta (default: optimizer's delta_star)");
  c_pl->add_option("--p", pl.p, "packing ratio threshold")
      ->capture_default_str();
  c_pl->add_option("--zero-tol", pl.zero_tol,
                   "nodal zero threshold relative to max|v|")
      ->capture_default_str();
  c_pl->add_option("--tol", pl.tol, "solver residual tolerance")
      ->capture_default_str();
  c_pl->add_flag("--oracle", pl.oracle,
                 "closed-form rectangle counts (no PDE solve)");
  c_pl->add_flag("--dump-pgm", pl.dump_pgm, "write the interior mask PGM");
  c_pl->add_flag("--pgm-ascii", pl.pgm_ascii, "use ASCII P2 instead of P5");

  OptimizeArgs op;
  CLI::App* c_op = app.add_subcommand(
      "optimize", "optimize the Eq. (38) gain over delta");
  c_op->set_help_flag("--help", "print help");
  c_op->add_option("--p", op.p, "packing ratio threshold")
      ->capture_default_str();
  c_op->add_option("--tol", op.tol, "golden-section width tolerance")
      ->capture_default_str();
  c_op->add_option("--scan-out", op.scan_out,
                   "also write the (delta, gain) scan CSV under this name");

  PackArgs pk;
  CLI::App* c_pk = app.add_subcommand(
      "pack", "build or load a disc packing and run the Blind check");
  c_pk->set_help_flag("--help", "print help");
  c_pk->add_option("--lattice", pk.lattice, "hex or square lattice");
  c_pk->add_flag("--greedy", pk.greedy, "random sequential insertion");
  c_pk->add_option("--load", pk.load, "load a packing CSV");
  c_pk->add_option("--torus", pk.torus, "torus dimensions LXxLY")
      ->capture_default_str();
  c_pk->add_option("--r", pk.r, "lattice disc radius")->capture_default_str();
  c_pk->add_option("--radii", pk.radii, "greedy radii law LO:HI")
      ->capture_default_str();
  c_pk->add_option("--attempts", pk.attempts, "greedy attempts")
      ->capture_default_str();
  c_pk->add_option("--seed", pk.seed, "greedy RNG seed")
      ->capture_default_str();
  c_pk->add_option("--p", pk.p, "Blind ratio threshold")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    RunContext ctx = make_run_context(
        app.get_subcommands().front()->get_name(), out_parent, run_dir);
    if (c_eigs->parsed()) cmd_eigs(eigs, ctx);
    if (c_pl->parsed()) cmd_pleijel(pl, ctx);
    if (c_op->parsed()) cmd_optimize(op, ctx);
    if (c_pk->parsed()) cmd_pack(pk, ctx);
    ctx.finish();
    std::cout << "run directory: " << ctx.dir.string() << "\n";
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
