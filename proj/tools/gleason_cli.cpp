// Batch front end: loads domain specs, runs decompositions, certificates and
// experiments, writes CSV tables and JSON summaries. Verdicts (PASS/FAIL of
// mathematical checks) are data and exit 0; only violated tool contracts exit
// nonzero (2), input errors exit 1.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "gleason/collar.hpp"
#include "gleason/domain.hpp"
#include "gleason/io.hpp"
#include "gleason/operators.hpp"
#include "gleason/pathplan.hpp"
#include "gleason/slice.hpp"

namespace fs = std::filesystem;
using gleason::cplx;
using gleason::CsvWriter;
using gleason::CVec;
using gleason::json;

namespace {

int thread_count() {
  if (const char* env = std::getenv("GLEASON_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

// deterministic order: results land in preassigned slots, written by one writer
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const int threads = std::min<int>(thread_count(), static_cast<int>(count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t]() {
      for (std::size_t i = t; i < count; i += threads) fn(i);
    });
  for (auto& th : pool) th.join();
}

CVec parse_point(const std::string& text, int n) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
  if (static_cast<int>(vals.size()) != 2 * n)
    throw gleason::Error("--point needs " + std::to_string(2 * n) + " comma-separated reals");
  return gleason::to_complex(vals);
}

std::string cnum(double v) { return CsvWriter::num(v); }

void write_json(const fs::path& path, const json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw gleason::Error("cannot write " + path.string());
  f << j.dump(2) << "\n";
}

json point_json(const CVec& z) {
  json a = json::array();
  for (const auto& c : z) a.push_back({{"re", c.real()}, {"im", c.imag()}});
  return a;
}

struct CommonArgs {
  std::string domain_path;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  int patches = 12;
};

gleason::Domain load(const CommonArgs& c) { return gleason::load_domain(c.domain_path); }

int run_decompose(const CommonArgs& c, const std::string& fspec,
                  const std::vector<std::string>& points, const std::string& method_name,
                  double residual_tol) {
  const gleason::Domain dom = load(c);
  const auto oracle = gleason::make_oracle(fspec, dom.n);
  const auto cover = gleason::collar_cover(dom, c.patches, {1500, c.seed});

  gleason::DecomposeOptions opt;
  opt.residual_tol = residual_tol;
  if (method_name == "auto") opt.method = gleason::Method::auto_select;
  else if (method_name == "closed_form") opt.method = gleason::Method::closed_form;
  else if (method_name == "direct_contour") opt.method = gleason::Method::direct_contour;
  else if (method_name == "sy_system") opt.method = gleason::Method::sy_system;
  else if (method_name == "approximant_limit") opt.method = gleason::Method::approximant_limit;
  else throw gleason::Error("unknown method '" + method_name + "'");

  std::vector<gleason::DecompositionReport> reports(points.size());
  std::vector<std::string> failures(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    try {
      reports[i] = gleason::decompose_at_point(oracle, parse_point(points[i], dom.n), dom, cover, opt);
    } catch (const gleason::Error& e) {
      failures[i] = e.what();
    }
  });

  json summary;
  summary["command"] = "decompose";
  summary["domain"] = dom.name;
  summary["function"] = fspec;
  summary["reports"] = json::array();
  int exit_code = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!failures[i].empty()) {
      summary["reports"].push_back({{"point", points[i]}, {"error", failures[i]}});
      std::cerr << "point " << points[i] << ": " << failures[i] << "\n";
      exit_code = 2;
      continue;
    }
    summary["reports"].push_back(gleason::report_to_json(reports[i]));
    if (!reports[i].ok) {
      std::cerr << "residual assertion failed at point " << points[i] << " (row " << i << ")\n";
      exit_code = 2;
    }
  }
  write_json(fs::path(c.out_dir) / "decomposition.json", summary);
  std::cout << "decompose: " << points.size() << " point(s), "
            << (exit_code == 0 ? "all residuals in tolerance" : "FAILURES present") << "\n";
  return exit_code;
}

int run_check_domain(const CommonArgs& c, int lines, int resolution) {
  const gleason::Domain dom = load(c);
  const auto cert = gleason::check_cconvex(dom, lines, resolution, c.seed);
  CsvWriter csv({"line_id", "a_re1", "a_im1", "a_re2", "a_im2", "b_re1", "b_im1", "b_re2",
                 "b_im2", "empty", "connected", "simply_connected", "min_defect"});
  auto flat = [](const CVec& v, std::vector<std::string>& row) {
    for (const auto& x : v) {
      row.push_back(cnum(x.real()));
      row.push_back(cnum(x.imag()));
    }
  };
  for (const auto& lr : cert.lines) {
    std::vector<std::string> row{std::to_string(lr.id)};
    flat(lr.a, row);
    flat(lr.b, row);
    row.push_back(lr.empty ? "1" : "0");
    row.push_back(lr.connected ? "1" : "0");
    row.push_back(lr.simply_connected ? "1" : "0");
    row.push_back(cnum(std::isfinite(lr.min_defect_rel) ? lr.min_defect_rel : -1.0));
    csv.row(row);
  }
  csv.save((fs::path(c.out_dir) / "lines.csv").string());
  json verdict = gleason::certificate_to_json(cert);
  verdict["command"] = "check-domain";
  verdict["domain"] = dom.name;
  write_json(fs::path(c.out_dir) / "verdict.json", verdict);
  std::cout << "check-domain: " << verdict["verdict"].get<std::string>() << " (" << lines
            << " lines)\n";
  return 0;
}

int run_estimate_k(const CommonArgs& c, const std::string& degrees, int trials,
                   bool approach_boundary, const std::string& target_spec) {
  const gleason::Domain dom = load(c);
  const auto cover = gleason::collar_cover(dom, c.patches, {1500, c.seed});
  int dlo = 1, dhi = 15;
  if (const auto colon = degrees.find(':'); colon != std::string::npos) {
    dlo = std::stoi(degrees.substr(0, colon));
    dhi = std::stoi(degrees.substr(colon + 1));
  }

  json summary;
  summary["command"] = "estimate-k";
  summary["domain"] = dom.name;

  if (!approach_boundary) {
    gleason::BallSpec B{CVec(dom.n, 0.0), 0.3};
    const auto S = gleason::build_recipe_S(dom, cover, B, 1e-3 * dom.r_scale, c.seed);
    std::vector<int> degs;
    for (int d = dlo; d <= dhi; ++d) degs.push_back(d);
    const auto table = gleason::estimate_K(dom, cover, B, S, degs, trials, c.seed);
    CsvWriter csv({"degree", "trial", "ratio"});
    for (const auto& r : table.rows)
      csv.row({std::to_string(r.degree), std::to_string(r.trial), cnum(r.ratio)});
    csv.save((fs::path(c.out_dir) / "k_table.csv").string());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    json per_deg = json::array();
    for (const auto& [deg, ratio] : table.per_degree) {
      per_deg.push_back({{"degree", deg}, {"max_ratio", ratio}});
      sx += deg;
      sy += std::log(ratio);
      sxx += static_cast<double>(deg) * deg;
      sxy += deg * std::log(ratio);
    }
    const double nn = static_cast<double>(table.per_degree.size());
    summary["per_degree"] = per_deg;
    summary["log_ratio_slope"] = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    write_json(fs::path(c.out_dir) / "k_summary.json", summary);
    std::cout << "estimate-k: slope " << summary["log_ratio_slope"].get<double>() << "\n";
    return 0;
  }

  // boundary-approach arm: B_k marching toward the target boundary point,
  // S frozen from the first ball
  CVec target = parse_point(target_spec, dom.n);
  CVec inward(dom.n);
  for (int j = 0; j < dom.n; ++j) inward[j] = dom.seed[j] - target[j];
  const double inorm = gleason::norm2(inward);
  for (auto& x : inward) x /= inorm;
  const int k_lo = 2, k_hi = 8;
  gleason::BallSpec B2{gleason::axpy(target, cplx(std::pow(2.0, -k_lo)), inward),
                       0.5 * std::pow(2.0, -k_lo)};
  const auto S = gleason::build_recipe_S(dom, cover, B2, 1e-3 * dom.r_scale, c.seed);
  CsvWriter csv({"k", "dist", "degree", "trial", "ratio"});
  json rows = json::array();
  double prev = -1.0;
  bool increasing = true;
  const int deg = std::min(dhi, 10);
  for (int k = k_lo; k <= k_hi; ++k) {
    const double dist = std::pow(2.0, -k);
    gleason::BallSpec Bk{gleason::axpy(target, cplx(dist), inward), 0.5 * dist};
    const auto table = gleason::estimate_K(dom, cover, Bk, S, {deg}, trials, c.seed + k);
    double mx = 0.0;
    for (const auto& r : table.rows) {
      csv.row({std::to_string(k), cnum(dist), std::to_string(r.degree), std::to_string(r.trial),
               cnum(r.ratio)});
      mx = std::max(mx, r.ratio);
    }
    rows.push_back({{"k", k}, {"dist", dist}, {"max_ratio", mx}});
    if (prev >= 0.0 && mx <= prev) increasing = false;
    prev = mx;
  }
  csv.save((fs::path(c.out_dir) / "k_boundary.csv").string());
  summary["boundary_rows"] = rows;
  summary["strictly_increasing"] = increasing;
  write_json(fs::path(c.out_dir) / "k_summary.json", summary);
  std::cout << "estimate-k --approach-boundary: "
            << (increasing ? "ratio strictly increasing" : "no monotone growth") << "\n";
  return 0;
}

int run_lemma1(const CommonArgs& c, int samples, double eps_override) {
  const gleason::Domain dom = load(c);
  const auto cover = gleason::collar_cover(dom, c.patches, {1500, c.seed});
  const auto rep = gleason::verify_lemma1(dom, cover, samples, c.seed, eps_override);
  CsvWriter csv({"patch_id", "s", "t_abs", "margin", "inside"});
  for (const auto* rows : {&rep.rows, &rep.refined_rows})
    for (const auto& r : *rows)
      csv.row({std::to_string(r.patch), cnum(r.s), cnum(r.t_abs), cnum(r.margin),
               r.inside ? "1" : "0"});
  csv.save((fs::path(c.out_dir) / "lemma1.csv").string());
  json summary;
  summary["command"] = "lemma1";
  summary["domain"] = dom.name;
  summary["sigma"] = cover.sigma;
  summary["clearance_A"] = cover.clearance_A;
  summary["violations"] = rep.violations;
  summary["worst_margin"] = rep.worst_margin;
  json bins = json::array();
  for (std::size_t b = 0; b < rep.bin_min_margin.size(); ++b)
    bins.push_back({{"bin", b},
                    {"count", rep.bin_count[b]},
                    {"min_margin", std::isfinite(rep.bin_min_margin[b]) ? rep.bin_min_margin[b] : -1.0}});
  summary["bins"] = bins;
  write_json(fs::path(c.out_dir) / "lemma1_summary.json", summary);
  std::cout << "lemma1: " << rep.violations << " violation(s), worst margin " << rep.worst_margin
            << "\n";
  return 0;
}

int run_continuity(const CommonArgs& c, const std::string& fspec, const std::string& point) {
  const gleason::Domain dom = load(c);
  const auto oracle = gleason::make_oracle(fspec, dom.n);
  const auto cover = gleason::collar_cover(dom, c.patches, {1500, c.seed});

  CVec z;
  if (!point.empty()) {
    z = parse_point(point, dom.n);
  } else {
    z = cover.boundary[0];
    for (auto& x : z) x *= (1.0 - 0.15 * cover.sigma);
  }
  std::vector<CVec> zs;
  for (int k = 3; k <= 12; ++k) {
    CVec zn = z;
    const double t = std::pow(2.0, -k) / gleason::norm2(z);
    for (auto& x : zn) x *= (1.0 - t);
    zs.push_back(std::move(zn));
  }
  const auto rows = gleason::continuity_experiment(oracle, z, zs, dom, cover);
  CsvWriter csv({"dist", "delta_I", "delta_T"});
  for (const auto& r : rows) csv.row({cnum(r.dist), cnum(r.delta_I), cnum(r.delta_T)});
  csv.save((fs::path(c.out_dir) / "continuity.csv").string());
  json summary;
  summary["command"] = "continuity";
  summary["domain"] = dom.name;
  summary["function"] = fspec;
  summary["point"] = point_json(z);
  summary["final_delta_I"] = rows.back().delta_I;
  summary["final_delta_T"] = rows.back().delta_T;
  write_json(fs::path(c.out_dir) / "continuity_summary.json", summary);
  std::cout << "continuity: final deltas I=" << rows.back().delta_I
            << " T=" << rows.back().delta_T << "\n";
  return 0;
}

int run_grange(CommonArgs c) {
  // the C^1 counterexample driver: certificate, membership sweep with
  // violations, and the boundary-approach ratio growth, in one bundle
  if (c.domain_path.empty()) {
    c.domain_path = (fs::path(c.out_dir) / "grange_domain.json").string();
    json j = {{"name", "grange"}, {"kind", "grange"}, {"epsilon", 1.0}, {"params", json::object()}};
    write_json(c.domain_path, j);
  }
  int rc = run_check_domain(c, 120, 192);
  rc |= run_lemma1(c, 20000, 1.0);
  rc |= run_estimate_k(c, "10:10", 50, true, "0,0,1,0");
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gleason decomposition toolbox"};
  app.require_subcommand(1);

  CommonArgs common;
  std::string fspec = "poly:z1^2";
  std::vector<std::string> points;
  std::string method = "auto";
  double residual_tol = 1e-7;
  int lines = 200, resolution = 256, samples = 10000, trials = 50;
  double eps_override = 0.0;
  std::string degrees = "1:15", target = "0,0,1,0", point;
  bool approach_boundary = false;

  auto add_common = [&](CLI::App* sub, bool need_domain = true) {
    auto* o = sub->add_option("--domain", common.domain_path, "domain spec JSON");
    if (need_domain) o->required();
    sub->add_option("--out", common.out_dir, "output directory");
    sub->add_option("--seed", common.seed, "RNG seed (full reproducibility)");
    sub->add_option("--patches", common.patches, "collar patch budget");
  };

  auto* dec = app.add_subcommand("decompose", "compute T_i(f) at points");
  add_common(dec);
  dec->add_option("--f", fspec, "function spec: poly:<expr>, json:<path>, rational:<name>");
  dec->add_option("--point", points, "point as 2n comma-separated reals")->required();
  dec->add_option("--method", method, "auto|closed_form|direct_contour|sy_system|approximant_limit");
  dec->add_option("--residual-tol", residual_tol, "residual tolerance");

  auto* chk = app.add_subcommand("check-domain", "C-convexity certificate");
  add_common(chk);
  chk->add_option("--lines", lines, "number of sampled lines");
  chk->add_option("--resolution", resolution, "slice raster resolution");

  auto* est = app.add_subcommand("estimate-k", "empirical key-estimate table");
  add_common(est);
  est->add_option("--degrees", degrees, "degree range lo:hi");
  est->add_option("--trials", trials, "trials per degree");
  est->add_flag("--approach-boundary", approach_boundary, "march B toward the boundary");
  est->add_option("--target", target, "boundary point for --approach-boundary");

  auto* lem = app.add_subcommand("lemma1", "collar membership-bound sweep");
  add_common(lem);
  lem->add_option("--samples", samples, "sample count");
  lem->add_option("--eps", eps_override, "Holder exponent override");

  auto* cont = app.add_subcommand("continuity", "I(z) continuity experiment");
  add_common(cont);
  cont->add_option("--f", fspec, "function spec");
  cont->add_option("--point", point, "collar point (default: auto-picked)");

  auto* gr = app.add_subcommand("grange", "C^1 counterexample driver bundle");
  add_common(gr, false);

  CLI11_PARSE(app, argc, argv);

  try {
    fs::create_directories(common.out_dir);
    if (dec->parsed()) return run_decompose(common, fspec, points, method, residual_tol);
    if (chk->parsed()) return run_check_domain(common, lines, resolution);
    if (est->parsed())
      return run_estimate_k(common, degrees, trials, approach_boundary, target);
    if (lem->parsed()) return run_lemma1(common, samples, eps_override);
    if (cont->parsed()) return run_continuity(common, fspec, point);
    if (gr->parsed()) return run_grange(common);
  } catch (const gleason::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
