#include "latmaj/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>

#include "latmaj/classical.hpp"
#include "latmaj/construction.hpp"
#include "latmaj/error.hpp"
#include "latmaj/kernel.hpp"
#include "latmaj/majorization.hpp"
#include "latmaj/report.hpp"
#include "latmaj/schur.hpp"

namespace latmaj {

std::vector<ProfileRow> emit_cumsum_profile(const Design& d) {
  const PCVector pc = pc_vector(d);
  const PCBenchmark bench = benchmark_pc(d.runs(), d.factors(), d.levels());
  const auto design_sums = prefix_sums(pc.sorted);
  const auto bench_sums = prefix_sums(bench.tilde);
  std::vector<ProfileRow> rows(design_sums.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    rows[r] = {static_cast<std::int64_t>(r + 1), design_sums[r], bench_sums[r]};
  }
  return rows;
}

namespace cli {

namespace {

std::string shape(const Design& d) {
  return "U(" + std::to_string(d.runs()) + "," + std::to_string(d.levels()) + "^" +
         std::to_string(d.factors()) + ")";
}

std::string display_name(const Design& d, std::size_t index) {
  return d.label().empty() ? "#" + std::to_string(index + 1) : d.label();
}

bool ties(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

std::vector<Design> subdesign_pool(const Design& d, int choose) {
  if (choose < 1 || choose > d.factors()) {
    throw Error(Errc::OutOfRange, "--choose must lie in 1.." + std::to_string(d.factors()));
  }
  std::vector<Design> pool;
  std::vector<int> idx(choose);
  std::iota(idx.begin(), idx.end(), 0);
  const int s = d.factors();
  while (true) {
    pool.push_back(project(d, idx));
    int pos = choose - 1;
    while (pos >= 0 && idx[pos] == s - choose + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int r = pos + 1; r < choose; ++r) idx[r] = idx[r - 1] + 1;
  }
  return pool;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::FileNotFound, "cannot write '" + path + "'");
  out << text;
}

// ----------------------------------------------------------------------------

int cmd_validate(const std::string& file, std::optional<int> q, std::ostream& out) {
  const Design d = read_design_file(file, q);
  out << "ok: " << shape(d) << " n=" << d.runs() << " s=" << d.factors() << " q=" << d.levels()
      << " class=" << to_string(equidistance_class(d)) << "\n";
  return kSuccess;
}

int cmd_pc(const std::string& file, bool json, std::ostream& out) {
  const Design d = read_design_file(file);
  const PCVector pc = pc_vector(d);
  const auto profile = emit_cumsum_profile(d);
  if (json) {
    Json j = to_json(pc);
    j["class"] = std::string(to_string(equidistance_class(d)));
    Json rows = Json::array();
    for (const auto& r : profile) rows.push_back({r.k, r.design, r.benchmark});
    j["profile"] = rows;
    out << j.dump(2) << "\n";
    return kSuccess;
  }
  out << "design: " << shape(d) << "\n"
      << "m: " << pc.m << "\n"
      << "sum: " << pc.sum << "\n"
      << "mean: " << to_string(pc.mean) << " (" << format_fixed4(to_double(pc.mean)) << ")\n"
      << "theta: " << pc.theta << "\n"
      << "frac: " << to_string(pc.frac) << "\n"
      << "class: " << to_string(equidistance_class(d)) << "\n";
  out << "values:";
  for (int v : pc.values) out << ' ' << v;
  out << "\nsorted:";
  for (int v : pc.sorted) out << ' ' << v;
  out << "\nprofile (k, design cumsum, benchmark cumsum):\n";
  for (const auto& r : profile) out << r.k << '\t' << r.design << '\t' << r.benchmark << "\n";
  return kSuccess;
}

int cmd_compare(const std::string& a, const std::string& b, bool json, std::ostream& out) {
  const Design left = read_design_file(a);
  const Design right = read_design_file(b);
  const MajorizationRelation rel = compare_pc(pc_vector(left), pc_vector(right));
  if (json) {
    Json j;
    j["left"] = a;
    j["right"] = b;
    j["relation"] = std::string(to_string(rel.tag));
    j["witness"] = rel.witness ? Json(*rel.witness) : Json(nullptr);
    out << j.dump(2) << "\n";
    return kSuccess;
  }
  out << to_string(rel.tag);
  if (rel.witness) out << " (witness prefix k=" << *rel.witness << ")";
  out << "\n";
  return kSuccess;
}

int cmd_rank(const std::vector<std::string>& files, std::optional<int> choose,
             const std::string& kernel_spec, bool json, std::ostream& out) {
  const ConvexKernel kernel = parse_kernel_spec(kernel_spec);
  std::vector<Design> pool;
  if (choose) {
    if (files.size() != 1) throw Error(Errc::InvalidParameter, "--choose takes exactly one design file");
    pool = subdesign_pool(read_design_file(files.front()), *choose);
  } else {
    for (const auto& f : files) pool.push_back(read_design_file(f));
  }
  const PoolClassification cls = classify_pool(std::span<const Design>(pool));

  struct Entry {
    std::size_t index;
    double psi;
    std::size_t rank;
  };
  std::vector<Entry> ranking;
  for (std::size_t idx : cls.admissible) ranking.push_back({idx, schur_psi(pool[idx], kernel).value, 0});
  std::stable_sort(ranking.begin(), ranking.end(),
                   [](const Entry& x, const Entry& y) { return x.psi < y.psi && !ties(x.psi, y.psi); });
  for (std::size_t r = 0; r < ranking.size(); ++r) {
    ranking[r].rank = (r > 0 && ties(ranking[r].psi, ranking[r - 1].psi)) ? ranking[r - 1].rank : r + 1;
  }

  if (json) {
    Json j;
    j["pool_size"] = pool.size();
    j["kernel"] = kernel.spec();
    Json majorants = Json::array();
    for (std::size_t idx : cls.majorants) majorants.push_back(display_name(pool[idx], idx));
    j["majorants"] = majorants;
    Json inad = Json::array();
    for (const auto& [idx, by] : cls.inadmissible) {
      inad.push_back({{"design", display_name(pool[idx], idx)}, {"dominated_by", display_name(pool[by], by)}});
    }
    j["inadmissible"] = inad;
    Json rows = Json::array();
    for (const auto& e : ranking) {
      const bool tied = std::count_if(ranking.begin(), ranking.end(),
                                      [&](const Entry& o) { return o.rank == e.rank; }) > 1;
      rows.push_back({{"rank", e.rank},
                      {"design", display_name(pool[e.index], e.index)},
                      {"psi", format_real(e.psi)},
                      {"tied", tied}});
    }
    j["ranking"] = rows;
    out << j.dump(2) << "\n";
    return kSuccess;
  }
  out << "pool: " << pool.size() << " designs " << shape(pool.front()) << "\n";
  out << "stage 1: " << cls.admissible.size() << " admissible, " << cls.inadmissible.size()
      << " inadmissible, majorant: ";
  if (cls.majorants.empty()) out << "none";
  for (std::size_t m = 0; m < cls.majorants.size(); ++m)
    out << (m ? ", " : "") << display_name(pool[cls.majorants[m]], cls.majorants[m]);
  out << "\n";
  for (const auto& [idx, by] : cls.inadmissible) {
    out << "  inadmissible " << display_name(pool[idx], idx) << " (dominated by "
        << display_name(pool[by], by) << ")\n";
  }
  out << "stage 2: kernel " << kernel.spec() << "\n";
  for (const auto& e : ranking) {
    out << "  " << e.rank << '\t' << display_name(pool[e.index], e.index) << '\t'
        << format_fixed4(e.psi) << "\n";
  }
  return kSuccess;
}

void print_row(std::ostream& out, const std::string& name, const std::string& value,
               const std::string& bound) {
  out << std::left << std::setw(22) << name << std::setw(44) << value << bound << "\n";
}

std::string join4(const std::vector<double>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_fixed4(v[i]);
  return s + ")";
}

int cmd_criteria(const std::string& file, std::optional<double> disc_a, std::optional<double> disc_b,
                 bool json, std::ostream& out) {
  const Design d = read_design_file(file);
  std::optional<DiscrepancyParams> params;
  if (disc_a || disc_b) {
    if (!disc_a || !disc_b) {
      throw Error(Errc::InvalidDiscrepancyParams, "--disc-a and --disc-b must be given together");
    }
    params = DiscrepancyParams::make(*disc_a, *disc_b, d.levels());
  }
  const CriterionReport r = criterion_report(d, params);
  if (json) {
    out << to_json(r).dump(2) << "\n";
    return kSuccess;
  }
  out << "design: " << shape(d) << "\n";
  print_row(out, "criterion", "value", "bound");
  for (const auto& e : r.schur) print_row(out, "schur " + e.kernel, format_fixed4(e.value), format_fixed4(e.bound));
  std::string exact = "(";
  for (std::size_t i = 0; i < r.gwp.exact.size(); ++i) exact += (i ? ", " : "") + to_string(r.gwp.exact[i]);
  print_row(out, "gwp", exact + ")", join4(r.benchmarks.Astar));
  print_row(out, "deviation", join4(r.deviation.B), join4(r.benchmarks.Bstar));
  if (r.ave_chi2) print_row(out, "ave_chi2", format_fixed4(*r.ave_chi2), format_fixed4(*r.ave_chi2_bound));
  if (r.ave_chi2_three_level) print_row(out, "ave_chi2 (x9/n)", format_fixed4(*r.ave_chi2_three_level), "");
  if (r.e_s2) print_row(out, "e_s2", format_fixed4(*r.e_s2), format_fixed4(*r.e_s2_bound));
  if (r.categorical) {
    print_row(out, "categorical D^2", format_fixed4(r.categorical->squared),
              format_fixed4(r.categorical->bound_squared));
    if (r.categorical->warning) out << "  warning: " << *r.categorical->warning << "\n";
  }
  if (r.cl2) {
    print_row(out, "CL2", format_fixed4(r.cl2->value), "");
    print_row(out, "CL2^2", format_fixed4(r.cl2->squared), format_fixed4(r.cl2->bound_squared));
  }
  if (r.wl2) {
    print_row(out, "WL2", format_fixed4(r.wl2->value), "");
    print_row(out, "WL2^2", format_fixed4(r.wl2->squared), format_fixed4(r.wl2->bound_squared));
  }
  return kSuccess;
}

int cmd_bounds(int n, int s, int q, const std::string& kernel_spec, bool json, std::ostream& out) {
  const ConvexKernel kernel = parse_kernel_spec(kernel_spec);
  const PCBenchmark bench = benchmark_pc(n, s, q);
  const double bound = theorem1_bound(n, s, q, kernel);
  const auto exact = theorem1_bound_exact(n, s, q, kernel);
  if (json) {
    Json j;
    j["n"] = n;
    j["s"] = s;
    j["q"] = q;
    j["kernel"] = kernel.spec();
    j["theta"] = bench.theta;
    j["frac"] = to_string(bench.frac);
    j["bound"] = format_real(bound);
    j["exact"] = exact ? Json(to_string(*exact)) : Json(nullptr);
    out << j.dump(2) << "\n";
    return kSuccess;
  }
  out << format_fixed4(bound) << "\n";
  out << "kernel: " << kernel.spec() << "  theta=" << bench.theta << "  f=" << to_string(bench.frac);
  if (exact) out << "  exact=" << to_string(*exact);
  out << "\n";
  return kSuccess;
}

int cmd_improve(const std::string& file, const std::string& kernel_spec, std::optional<int> max_iters,
                int restarts, std::uint64_t seed, const std::string& out_path,
                const std::string& trace_path, std::ostream& out) {
  const ConvexKernel kernel = parse_kernel_spec(kernel_spec);
  const Design d = read_design_file(file);
  const SearchResult result = improve_design(d, kernel, restarts, max_iters, seed);
  const DescentTrace& trace = result.trace;
  out << "kernel: " << kernel.spec() << "\n"
      << "start: " << (result.best_restart == 0 ? std::string("input") : "restart " + std::to_string(result.best_restart)) << "\n"
      << "initial psi: " << format_fixed4(trace.initial_psi) << "\n"
      << "final psi: " << format_fixed4(trace.final_psi) << "\n"
      << "bound: " << format_fixed4(trace.bound) << "\n"
      << "iterations: " << trace.iterations.size() << "\n"
      << "terminated: " << to_string(trace.terminated) << "\n";
  Design best = result.best;
  best.set_label({});
  if (!trace_path.empty()) write_text(trace_path, trace_jsonl(trace));
  if (!out_path.empty()) {
    write_design_file(out_path, best);
  } else {
    out << format_design(best);
  }
  return kSuccess;
}

int cmd_gen(int n, int s, int q, std::uint64_t seed, const std::string& out_path, std::ostream& out) {
  const Design d = random_balanced(n, s, q, seed);
  if (out_path.empty()) {
    out << format_design(d);
  } else {
    write_design_file(out_path, d);
  }
  return kSuccess;
}

int cmd_subdesigns(const std::string& file, int choose, bool list, std::ostream& out) {
  const Design d = read_design_file(file);
  const auto pool = subdesign_pool(d, choose);
  const PoolClassification cls = classify_pool(std::span<const Design>(pool));
  out << "subdesigns: " << pool.size() << " of " << shape(pool.front()) << "\n";
  out << "admissible: " << cls.admissible.size() << "  inadmissible: " << cls.inadmissible.size()
      << "  majorant: ";
  if (cls.majorants.empty()) out << "none";
  for (std::size_t m = 0; m < cls.majorants.size(); ++m)
    out << (m ? ", " : "") << pool[cls.majorants[m]].label();
  out << "\n";
  if (list) {
    std::vector<char> admissible(pool.size(), 0);
    for (std::size_t idx : cls.admissible) admissible[idx] = 1;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const PCVector pc = pc_vector(pool[i]);
      std::int64_t squares = 0;
      for (int v : pc.values) squares += static_cast<std::int64_t>(v) * v;
      out << pool[i].label() << "\tmin=" << pc.sorted.front() << "\tmax=" << pc.sorted.back()
          << "\tsum_sq=" << squares << "\t" << (admissible[i] ? "admissible" : "inadmissible") << "\n";
    }
  }
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Majorization-based assessment and construction of balanced lattice designs", "latmaj"};
  app.require_subcommand(1);

  std::string file, file_b, kernel_spec, out_path, trace_path;
  std::vector<std::string> files;
  std::optional<int> q, choose, max_iters;
  std::optional<double> disc_a, disc_b;
  bool json = false, list = false;
  int n = 0, s = 0, levels = 0, restarts = 0;
  std::uint64_t seed = 0;

  auto* validate = app.add_subcommand("validate", "Check that a design file is a balanced design");
  validate->add_option("file", file, "Design file")->required();
  validate->add_option("--q", q, "Level count");

  auto* pc = app.add_subcommand("pc", "Pairwise-coincidence vector and cumulative profile");
  pc->add_option("file", file, "Design file")->required();
  pc->add_flag("--json", json, "JSON output");

  auto* compare = app.add_subcommand("compare", "Majorization relation between two designs");
  compare->add_option("fileA", file, "Left design")->required();
  compare->add_option("fileB", file_b, "Right design")->required();
  compare->add_flag("--json", json, "JSON output");

  auto* rank = app.add_subcommand("rank", "Two-stage ranking of a design pool");
  rank->add_option("files", files, "Design files")->required();
  rank->add_option("--choose", choose, "Rank all k-column projections of one design");
  rank->add_option("--kernel", kernel_spec, "Convex kernel spec")->required();
  rank->add_flag("--json", json, "JSON output");

  auto* criteria = app.add_subcommand("criteria", "All classical criteria with their bounds");
  criteria->add_option("file", file, "Design file")->required();
  criteria->add_option("--disc-a", disc_a, "Categorical discrepancy parameter a");
  criteria->add_option("--disc-b", disc_b, "Categorical discrepancy parameter b");
  criteria->add_flag("--json", json, "JSON output");

  auto* bounds = app.add_subcommand("bounds", "Universal lower bound for a kernel");
  bounds->add_option("--n", n, "Runs")->required();
  bounds->add_option("--s", s, "Factors")->required();
  bounds->add_option("--q", levels, "Levels")->required();
  bounds->add_option("--kernel", kernel_spec, "Convex kernel spec")->required();
  bounds->add_flag("--json", json, "JSON output");

  auto* improve = app.add_subcommand("improve", "Robin Hood swap descent");
  improve->add_option("file", file, "Design file")->required();
  improve->add_option("--kernel", kernel_spec, "Convex kernel spec")->required();
  improve->add_option("--max-iters", max_iters, "Iteration cap (default 10*n*s)");
  improve->add_option("--restarts", restarts, "Additional random restarts");
  improve->add_option("--seed", seed, "Seed for restarts");
  improve->add_option("--out", out_path, "Write the improved design here");
  improve->add_option("--trace", trace_path, "Write the descent trace (JSON lines) here");

  auto* gen = app.add_subcommand("gen", "Random balanced design");
  gen->add_option("--n", n, "Runs")->required();
  gen->add_option("--s", s, "Factors")->required();
  gen->add_option("--q", levels, "Levels")->required();
  gen->add_option("--seed", seed, "Seed")->required();
  gen->add_option("--out", out_path, "Output file");

  auto* subdesigns = app.add_subcommand("subdesigns", "Enumerate k-column projections as a pool");
  subdesigns->add_option("file", file, "Design file")->required();
  subdesigns->add_option("--choose", choose, "Projection size")->required();
  subdesigns->add_flag("--list", list, "List every projection");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (*validate) return cmd_validate(file, q, out);
    if (*pc) return cmd_pc(file, json, out);
    if (*compare) return cmd_compare(file, file_b, json, out);
    if (*rank) return cmd_rank(files, choose, kernel_spec, json, out);
    if (*criteria) return cmd_criteria(file, disc_a, disc_b, json, out);
    if (*bounds) return cmd_bounds(n, s, levels, kernel_spec, json, out);
    if (*improve) {
      if (restarts < 0) throw Error(Errc::InvalidParameter, "--restarts must be nonnegative");
      return cmd_improve(file, kernel_spec, max_iters, restarts, seed, out_path, trace_path, out);
    }
    if (*gen) return cmd_gen(n, s, levels, seed, out_path, out);
    if (*subdesigns) return cmd_subdesigns(file, *choose, list, out);
  } catch (const Error& e) {
    err << "error [" << errc_name(e.code()) << "]: " << e.what() << "\n";
    return kDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  }
  return kUsageError;
}

}  // namespace cli
}  // namespace latmaj
