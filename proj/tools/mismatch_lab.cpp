// Command-line surface for the mismatched-decoding library. Talks to the
// shared library through its C interface only; everything here is argument
// plumbing, file layout, and text formatting.

#include <mismatch/mismatch.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct ApiError {
  mm_status status;
  std::string detail;
};

void check(mm_status st) {
  if (st != MM_OK) throw ApiError{st, mm_last_error()};
}

int exit_code_for(mm_status st) {
  switch (st) {
    case MM_OK:
      return 0;
    case MM_ERR_BUDGET_EXCEEDED:
      return 1;
    case MM_ERR_PARSE:
    case MM_ERR_IO:
    case MM_ERR_ROW_NOT_STOCHASTIC:
      return 2;
    case MM_ERR_METRIC_ZERO_ON_SUPPORT:
    case MM_ERR_NEGATIVE_ENTRY:
    case MM_ERR_NONPOSITIVE_TILT:
    case MM_ERR_DENOMINATOR_ZERO:
    case MM_ERR_IMPOSSIBLE_PAIR:
    case MM_ERR_EMPTY_DISTRIBUTION:
    case MM_ERR_ORDERING_VIOLATED:
    case MM_ERR_DIMENSION_MISMATCH:
      return 3;
    default:
      return 4;
  }
}

// Unique owners for the C handles.
template <class T, void (*Free)(T*)>
struct Owner {
  T* h = nullptr;
  Owner() = default;
  explicit Owner(T* p) : h(p) {}
  ~Owner() { reset(); }
  Owner(const Owner&) = delete;
  Owner& operator=(const Owner&) = delete;
  Owner(Owner&& o) noexcept : h(o.h) { o.h = nullptr; }
  Owner& operator=(Owner&& o) noexcept {
    if (this != &o) {
      reset();
      h = o.h;
      o.h = nullptr;
    }
    return *this;
  }
  void reset() {
    if (h) Free(h);
    h = nullptr;
  }
  T** slot() {
    reset();
    return &h;
  }
  T* get() const { return h; }
};

using Pair = Owner<mm_pair, mm_pair_free>;
using Dist = Owner<mm_dist, mm_dist_free>;
using Spectrum = Owner<mm_spectrum, mm_spectrum_free>;
using CodebookH = Owner<mm_codebook, mm_codebook_free>;
using RateH = Owner<mm_rate_result, mm_rate_result_free>;
using SandwichH = Owner<mm_sandwich, mm_sandwich_free>;

std::uint64_t budget_override() {
  if (const char* env = std::getenv("MISMATCH_LAB_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::uint64_t>(v);
    std::cerr << "warning: ignoring unparsable MISMATCH_LAB_BUDGET\n";
  }
  return 0;  // library default
}

std::string fmt(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Tabular output: one column order, emitted as CSV or JSON lines.
struct Table {
  std::vector<std::string> columns;
  std::vector<ordered_json> rows;

  std::string to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      out += columns[i];
      out += i + 1 < columns.size() ? ',' : '\n';
    }
    for (const ordered_json& r : rows) {
      for (std::size_t i = 0; i < columns.size(); ++i) {
        const json& v = r.at(columns[i]);
        if (v.is_string())
          out += v.get<std::string>();
        else if (v.is_boolean())
          out += v.get<bool>() ? "1" : "0";
        else if (v.is_number_float())
          out += fmt(v.get<double>());
        else
          out += v.dump();
        out += i + 1 < columns.size() ? ',' : '\n';
      }
    }
    return out;
  }

  std::string to_jsonl() const {
    std::string out;
    for (const ordered_json& r : rows) {
      out += r.dump();
      out += '\n';
    }
    return out;
  }
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out.good()) throw ApiError{MM_ERR_IO, "cannot open " + path.string()};
  out << text;
  out.flush();
  if (!out.good()) throw ApiError{MM_ERR_IO, "cannot write " + path.string()};
}

struct Run {
  fs::path dir;
  std::string subcommand;
  std::vector<std::string> argv;
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  std::vector<std::string> outputs;
  std::string format = "csv";

  void emit(const std::string& stem, const Table& t) {
    const std::string name = stem + (format == "csv" ? ".csv" : ".jsonl");
    write_text(dir / name, format == "csv" ? t.to_csv() : t.to_jsonl());
    outputs.push_back(name);
  }
  void emit_raw(const std::string& name, const std::string& text) {
    write_text(dir / name, text);
    outputs.push_back(name);
  }
  void finish() {
    using namespace std::chrono;
    ordered_json meta;
    meta["version"] = mm_version();
    meta["subcommand"] = subcommand;
    meta["argv"] = argv;
    meta["seed"] = seed;
    meta["budget_override"] = budget;
    meta["wall_ms"] =
        duration_cast<milliseconds>(steady_clock::now() - t0).count();
    meta["outputs"] = outputs;
    write_text(dir / "run_meta.json", meta.dump(2) + "\n");
    std::cout << "run directory: " << dir.string() << "\n";
  }
};

// Fresh timestamped directory per run; a counter suffix dodges collisions.
fs::path make_run_dir(const std::string& out_root, const std::string& sub) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", &tm);
  const fs::path root(out_root);
  fs::create_directories(root);
  for (int i = 0;; ++i) {
    fs::path d = root / (sub + "-" + stamp + (i ? "-" + std::to_string(i) : ""));
    if (!fs::exists(d)) {
      fs::create_directories(d);
      return d;
    }
  }
}

Pair load_pair(const std::string& path) {
  Pair p;
  check(mm_pair_load_json(path.c_str(), p.slot()));
  return p;
}

Dist load_dist_or_uniform(const std::string& dist_path, const mm_pair* pair) {
  Dist d;
  if (dist_path.empty()) {
    int32_t in = 0;
    check(mm_pair_input_size(pair, &in));
    check(mm_dist_uniform(in, d.slot()));
    return d;
  }
  std::ifstream in(dist_path, std::ios::binary);
  if (!in.good()) throw ApiError{MM_ERR_IO, "cannot open " + dist_path};
  json j = json::parse(in, nullptr, false);
  if (j.is_object() && j.contains("p")) j = j.at("p");
  if (j.is_discarded() || !j.is_array())
    throw ApiError{MM_ERR_PARSE, dist_path + ": expected a JSON array"};
  std::vector<double> p;
  for (const json& v : j) {
    if (!v.is_number())
      throw ApiError{MM_ERR_PARSE, dist_path + ": non-numeric entry"};
    p.push_back(v.get<double>());
  }
  check(mm_dist_create(p.data(), static_cast<int32_t>(p.size()), d.slot()));
  return d;
}

std::string status_kind_name(int32_t kind) {
  switch (kind) {
    case 0: return "exact";
    case 1: return "converged";
    case 2: return "budget_hit";
  }
  return "unknown";
}

constexpr double kLn2 = 0.6931471805599453;

/* ---- subcommand bodies ---- */

int cmd_validate(const std::string& problem) {
  Pair p = load_pair(problem);
  int32_t in = 0, out = 0, k = 0;
  double floor = 0, scale = 0;
  check(mm_pair_input_size(p.get(), &in));
  check(mm_pair_output_size(p.get(), &out));
  check(mm_pair_block_length(p.get(), &k));
  check(mm_pair_metric_floor(p.get(), &floor));
  check(mm_pair_metric_scale(p.get(), &scale));
  std::cout << "ok input_size=" << in << " output_size=" << out << " k=" << k
            << " q_star=" << fmt(floor) << " metric_scale=" << fmt(scale)
            << "\n";
  return 0;
}

int cmd_spectrum(Run& run, const std::string& problem,
                 const std::string& dist_path, const std::vector<int>& ns,
                 const std::vector<double>& epss) {
  Pair pair = load_pair(problem);
  Dist dist = load_dist_or_uniform(dist_path, pair.get());

  Table queries;
  queries.columns = {"n", "query", "arg", "value"};
  for (const int n : ns) {
    Spectrum sp;
    check(mm_spectrum_exact(pair.get(), dist.get(), n, run.budget, sp.slot()));
    int64_t count = 0;
    check(mm_spectrum_size(sp.get(), &count));

    std::string body = "value,prob\n";
    std::string cdf_body = "value,cdf\n";
    double cum = 0.0;
    for (int64_t i = 0; i < count; ++i) {
      double v = 0, pr = 0;
      check(mm_spectrum_atom(sp.get(), i, &v, &pr));
      cum += pr;
      body += fmt17(v) + "," + fmt17(pr) + "\n";
      cdf_body += fmt17(v) + "," + fmt17(cum) + "\n";
    }
    run.emit_raw("spectrum_n" + std::to_string(n) + ".csv", body);
    run.emit_raw("cdf_n" + std::to_string(n) + ".csv", cdf_body);

    double mean = 0, m2 = 0, tail0 = 0;
    check(mm_spectrum_mean(sp.get(), &mean));
    check(mm_spectrum_second_moment(sp.get(), &m2));
    check(mm_spectrum_tail_leq(sp.get(), 0.0, &tail0));
    queries.rows.push_back({{"n", n}, {"query", "mean"}, {"arg", 0.0}, {"value", mean}});
    queries.rows.push_back(
        {{"n", n}, {"query", "second_moment"}, {"arg", 0.0}, {"value", m2}});
    queries.rows.push_back(
        {{"n", n}, {"query", "tail_leq"}, {"arg", 0.0}, {"value", tail0}});
    for (const double eps : epss) {
      double qv = 0;
      check(mm_spectrum_quantile(sp.get(), eps, &qv));
      queries.rows.push_back(
          {{"n", n}, {"query", "quantile"}, {"arg", eps}, {"value", qv}});
    }
  }
  run.emit("queries", queries);
  run.finish();
  return 0;
}

int cmd_rates(Run& run, const std::string& problem, std::vector<int> ks,
              const std::string& mode_name, int restarts, bool bits) {
  Pair base = load_pair(problem);
  mm_rate_mode mode = MM_RATE_GMI;
  if (mode_name == "lm") mode = MM_RATE_LM;
  if (mode_name == "s1") mode = MM_RATE_S1;

  Table table;
  table.columns = {"k", "value_nats", "s", "status"};
  if (bits) table.columns.insert(table.columns.begin() + 2, "value_bits");

  struct Done {
    int k;
    Dist p;
  };
  std::vector<Done> done;

  for (const int k : ks) {
    Pair ext;
    check(mm_pair_product_extend(base.get(), k, run.budget, ext.slot()));

    // Warm start from the largest previously solved divisor of k.
    Dist warm;
    int best = 0;
    for (const Done& d : done)
      if (d.k < k && k % d.k == 0 && d.k > best) best = d.k;
    if (best > 0) {
      for (const Done& d : done) {
        if (d.k != best) continue;
        Dist acc;
        check(mm_dist_product(d.p.get(), d.p.get(), acc.slot()));
        for (int reps = 2; reps < k / best; ++reps) {
          Dist next;
          check(mm_dist_product(acc.get(), d.p.get(), next.slot()));
          acc = std::move(next);
        }
        warm = k / best == 1 ? Dist() : std::move(acc);
        break;
      }
    }

    RateH r;
    check(mm_optimize_input(ext.get(), mode, restarts, run.seed,
                            warm.get(), r.slot()));
    double value = 0, s = 0;
    int32_t rk = 0, status = 0, offsets = 0;
    check(mm_rate_value(r.get(), &value));
    check(mm_rate_param_s(r.get(), &s));
    check(mm_rate_block_length(r.get(), &rk));
    check(mm_rate_status_kind(r.get(), &status));
    check(mm_rate_offset_count(r.get(), &offsets));

    ordered_json row{{"k", rk}, {"value_nats", value}};
    if (bits) row["value_bits"] = value / kLn2;
    row["s"] = s;
    row["status"] = status_kind_name(status);
    table.rows.push_back(std::move(row));

    Dist popt;
    check(mm_rate_input(r.get(), popt.slot()));
    int32_t psize = 0;
    check(mm_dist_size(popt.get(), &psize));
    ordered_json detail;
    detail["k"] = rk;
    detail["value_nats"] = value;
    detail["s"] = s;
    detail["status"] = status_kind_name(status);
    detail["a"] = json::array();
    for (int32_t i = 0; i < offsets; ++i) {
      double av = 0;
      check(mm_rate_offset(r.get(), i, &av));
      detail["a"].push_back(av);
    }
    detail["p"] = json::array();
    for (int32_t i = 0; i < psize; ++i) {
      double pv = 0;
      check(mm_dist_prob(popt.get(), i, &pv));
      detail["p"].push_back(pv);
    }
    run.emit_raw("rate_k" + std::to_string(k) + ".json", detail.dump(2) + "\n");

    done.push_back(Done{k, std::move(popt)});
  }
  run.emit("rates", table);
  run.finish();
  return 0;
}

int cmd_simulate(Run& run, const std::string& problem, int n, std::uint64_t M,
                 const std::string& kind_name, const std::string& decoder_name,
                 std::uint64_t trials, const std::string& codebook_path) {
  Pair pair = load_pair(problem);
  Dist dist = load_dist_or_uniform("", pair.get());

  CodebookH cb;
  if (!codebook_path.empty()) {
    check(mm_codebook_load_json(codebook_path.c_str(), cb.slot()));
  } else {
    const mm_codebook_kind kind = kind_name == "constant_composition"
                                      ? MM_CODEBOOK_CONSTANT_COMPOSITION
                                      : MM_CODEBOOK_IID;
    check(mm_codebook_gen(kind, dist.get(), n, M, run.seed, cb.slot()));
  }
  check(mm_codebook_save_json(cb.get(), (run.dir / "codebook.json").c_str()));
  run.outputs.push_back("codebook.json");

  std::vector<mm_decoder_rule> rules;
  if (decoder_name == "stochastic" || decoder_name == "both")
    rules.push_back(MM_DECODER_STOCHASTIC);
  if (decoder_name == "max_metric" || decoder_name == "both")
    rules.push_back(MM_DECODER_MAX_METRIC);

  Table table;
  table.columns = {"decoder", "method", "pe", "stderr", "trials", "seed"};
  for (const mm_decoder_rule rule : rules) {
    const std::string dname =
        rule == MM_DECODER_STOCHASTIC ? "stochastic" : "max_metric";
    double pe = 0;
    const mm_status st = mm_exact_error(cb.get(), pair.get(), rule, run.budget, &pe);
    if (st == MM_OK) {
      table.rows.push_back({{"decoder", dname},
                            {"method", "exact"},
                            {"pe", pe},
                            {"stderr", 0.0},
                            {"trials", 0},
                            {"seed", run.seed}});
    } else if (st == MM_ERR_BUDGET_EXCEEDED && trials > 0) {
      std::cerr << "note: exact enumeration over budget for " << dname
                << "; reporting Monte Carlo only\n";
    } else {
      throw ApiError{st, mm_last_error()};
    }
    if (trials > 0) {
      double mpe = 0, se = 0;
      check(mm_mc_error(cb.get(), pair.get(), rule, trials, run.seed, &mpe, &se));
      table.rows.push_back({{"decoder", dname},
                            {"method", "monte_carlo"},
                            {"pe", mpe},
                            {"stderr", se},
                            {"trials", trials},
                            {"seed", run.seed}});
    }
  }
  run.emit("error", table);
  run.finish();
  return 0;
}

int cmd_bounds(Run& run, const std::string& problem,
               const std::string& dist_path, const std::vector<int>& ns,
               const std::vector<std::uint64_t>& Ms, int n_seeds,
               int gamma_points, const std::vector<double>& ss,
               std::uint64_t trials) {
  Pair pair = load_pair(problem);
  Dist dist = load_dist_or_uniform(dist_path, pair.get());

  Table table;
  table.columns = {"n",  "M",   "gamma",     "s",         "seed",
                   "pe_exact", "pe_mc", "stderr", "feinstein", "rcu",
                   "verdu_han", "verdict_a", "verdict_b"};
  for (const int n : ns) {
    std::vector<double> gammas(static_cast<std::size_t>(gamma_points));
    check(mm_gamma_grid(n, gamma_points, gammas.data()));
    for (const std::uint64_t M : Ms) {
      std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n_seeds));
      for (int i = 0; i < n_seeds; ++i)
        seeds[static_cast<std::size_t>(i)] =
            run.seed + static_cast<std::uint64_t>(i);
      SandwichH sw;
      check(mm_sandwich_run(pair.get(), dist.get(), n, M, seeds.data(),
                            n_seeds, gammas.data(), gamma_points, ss.data(),
                            static_cast<int32_t>(ss.size()), trials,
                            run.budget, sw.slot()));
      int64_t rows = 0;
      check(mm_sandwich_rows(sw.get(), &rows));

      // Per-gamma averages for the plot file.
      std::vector<double> vh_sum(static_cast<std::size_t>(gamma_points), 0.0);
      std::vector<int> vh_cnt(static_cast<std::size_t>(gamma_points), 0);

      for (int64_t i = 0; i < rows; ++i) {
        double c[13];
        check(mm_sandwich_row(sw.get(), i, c));
        table.rows.push_back({{"n", static_cast<int>(c[0])},
                              {"M", static_cast<std::uint64_t>(c[1])},
                              {"gamma", c[2]},
                              {"s", c[3]},
                              {"seed", static_cast<std::uint64_t>(c[4])},
                              {"pe_exact", c[5]},
                              {"pe_mc", c[6]},
                              {"stderr", c[7]},
                              {"feinstein", c[8]},
                              {"rcu", c[9]},
                              {"verdu_han", c[10]},
                              {"verdict_a", c[11] != 0.0},
                              {"verdict_b", c[12] != 0.0}});
        for (int g = 0; g < gamma_points; ++g) {
          if (std::abs(c[2] - gammas[static_cast<std::size_t>(g)]) < 1e-15) {
            vh_sum[static_cast<std::size_t>(g)] += c[10];
            ++vh_cnt[static_cast<std::size_t>(g)];
          }
        }
      }

      Table curve;
      curve.columns = {"gamma", "feinstein_s1", "rcu_s1", "mean_verdu_han"};
      double rcu1 = 0;
      int32_t vac = 0;
      check(mm_rcu_s_bound(pair.get(), dist.get(), n, static_cast<double>(M),
                           1.0, run.budget, &rcu1, &vac));
      for (int g = 0; g < gamma_points; ++g) {
        double f1 = 0;
        check(mm_feinstein_bound(pair.get(), dist.get(), n,
                                 static_cast<double>(M),
                                 gammas[static_cast<std::size_t>(g)], 1.0,
                                 run.budget, &f1, &vac));
        curve.rows.push_back(
            {{"gamma", gammas[static_cast<std::size_t>(g)]},
             {"feinstein_s1", f1},
             {"rcu_s1", rcu1},
             {"mean_verdu_han",
              vh_sum[static_cast<std::size_t>(g)] /
                  std::max(vh_cnt[static_cast<std::size_t>(g)], 1)}});
      }
      run.emit("bound_curve_n" + std::to_string(n) + "_M" + std::to_string(M),
               curve);
    }
  }
  run.emit("sandwich", table);
  run.finish();
  return 0;
}

int cmd_gap(Run& run, const std::string& problem, const std::string& dist_path) {
  Pair pair = load_pair(problem);
  Dist dist = load_dist_or_uniform(dist_path, pair.get());

  double eta = 0, kl = 0;
  check(mm_gap_bound(pair.get(), dist.get(), &eta, &kl));
  int32_t k = 0;
  check(mm_pair_block_length(pair.get(), &k));
  RateH cap;
  check(mm_matched_capacity(pair.get(), cap.slot()));
  double c = 0;
  check(mm_rate_value(cap.get(), &c));
  double s1 = 0;
  check(mm_rate_objective(pair.get(), dist.get(), 1.0, nullptr, &s1));

  Table t;
  t.columns = {"eta_upper", "kl", "k", "matched_capacity", "rate_s1", "diff"};
  t.rows.push_back({{"eta_upper", eta},
                    {"kl", kl},
                    {"k", k},
                    {"matched_capacity", c},
                    {"rate_s1", s1},
                    {"diff", c - s1}});
  run.emit("gap", t);
  std::cout << "gap upper bound " << fmt(eta) << " nats (capacity "
            << fmt(c) << ", rate at s=1 " << fmt(s1) << ")\n";
  run.finish();
  return 0;
}

int cmd_bsc(Run& run, double p, double pp, bool bits) {
  double cap = 0, s_star = 0;
  check(mm_bsc_closed_form(p, pp, &cap, &s_star));
  char line[160];
  if (bits)
    std::snprintf(line, sizeof line,
                  "capacity %.6f nats (%.6f bits), s* %.6f\n", cap, cap / kLn2,
                  s_star);
  else
    std::snprintf(line, sizeof line, "capacity %.6f nats, s* %.6f\n", cap,
                  s_star);
  std::cout << line;
  Table t;
  t.columns = {"p", "p_prime", "capacity_nats", "s_star"};
  t.rows.push_back(
      {{"p", p}, {"p_prime", pp}, {"capacity_nats", cap}, {"s_star", s_star}});
  run.emit("bsc", t);
  run.finish();
  return 0;
}

int cmd_checks(Run& run, const std::string& problem,
               const std::string& dist_path, const std::vector<int>& ns,
               const std::vector<double>& epss, int pc_n, std::uint64_t pc_m,
               int pc_seeds) {
  Pair pair = load_pair(problem);
  Dist dist = load_dist_or_uniform(dist_path, pair.get());

  Table t;
  t.columns = {"check", "n", "param", "lhs", "rhs", "margin", "holds"};
  bool all_hold = true;
  for (const int n : ns) {
    for (const double eps : epss) {
      double lhs = 0, rhs = 0;
      int32_t holds = 0;
      check(mm_overshoot_check(pair.get(), dist.get(), n, eps, run.budget,
                               &lhs, &rhs, &holds));
      all_hold = all_hold && holds;
      t.rows.push_back({{"check", "overshoot"},
                        {"n", n},
                        {"param", eps},
                        {"lhs", lhs},
                        {"rhs", rhs},
                        {"margin", rhs - lhs},
                        {"holds", holds != 0}});
    }
    double moment = 0, bound = 0;
    int32_t holds = 0;
    check(mm_ui_bound_check(pair.get(), dist.get(), n, run.budget, &moment,
                            &bound, &holds));
    all_hold = all_hold && holds;
    t.rows.push_back({{"check", "ui_bound"},
                      {"n", n},
                      {"param", 0.0},
                      {"lhs", moment},
                      {"rhs", bound},
                      {"margin", bound - moment},
                      {"holds", holds != 0}});
  }

  int32_t in = 0;
  check(mm_pair_input_size(pair.get(), &in));
  Dist uni;
  check(mm_dist_uniform(in, uni.slot()));
  for (int i = 0; i < pc_seeds; ++i) {
    const std::uint64_t seed = run.seed + static_cast<std::uint64_t>(i);
    CodebookH cb;
    check(mm_codebook_gen(MM_CODEBOOK_IID, uni.get(), pc_n, pc_m, seed,
                          cb.slot()));
    double lhs = 0, rhs = 0, diff = 0;
    check(mm_pc_identity_check(cb.get(), pair.get(), run.budget, &lhs, &rhs,
                               &diff));
    const bool holds = diff < 1e-12;
    all_hold = all_hold && holds;
    t.rows.push_back({{"check", "pc_identity"},
                      {"n", pc_n},
                      {"param", static_cast<double>(seed)},
                      {"lhs", lhs},
                      {"rhs", rhs},
                      {"margin", diff},
                      {"holds", holds}});
  }
  run.emit("checks", t);
  std::cout << (all_hold ? "all checks hold\n" : "some checks FAILED\n");
  run.finish();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-blocklength analysis of mismatched stochastic decoding"};
  app.require_subcommand(1);

  std::string problem, dist_path, out_root = "runs", format = "csv";
  std::uint64_t seed = 1;

  const auto add_common = [&](CLI::App* sub, bool needs_problem) {
    if (needs_problem)
      sub->add_option("--problem", problem, "problem JSON file")->required();
    sub->add_option("--out", out_root, "output root directory");
    sub->add_option("--format", format, "table format")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    sub->add_option("--seed", seed, "master seed");
  };

  auto* validate = app.add_subcommand("validate", "parse and validate a problem file");
  add_common(validate, true);

  auto* spectrum = app.add_subcommand("spectrum", "exact spectra and queries");
  std::vector<int> sp_ns{1, 2, 4, 8};
  std::vector<double> sp_eps{0.01, 0.1, 0.5};
  add_common(spectrum, true);
  spectrum->add_option("--n", sp_ns, "block lengths");
  spectrum->add_option("--dist", dist_path, "input distribution JSON");
  spectrum->add_option("--eps", sp_eps, "quantile levels");

  auto* rates = app.add_subcommand("rates", "optimized rates over k");
  std::vector<int> rt_ks{1, 2};
  std::string rt_mode = "gmi";
  int rt_restarts = 8;
  bool rt_bits = false;
  add_common(rates, true);
  rates->add_option("--k", rt_ks, "product extension orders");
  rates->add_option("--mode", rt_mode, "objective")
      ->check(CLI::IsMember({"gmi", "lm", "s1"}));
  rates->add_option("--restarts", rt_restarts, "random restarts");
  rates->add_flag("--bits", rt_bits, "also report bits");

  auto* simulate = app.add_subcommand("simulate", "codebook error probability");
  int sim_n = 4;
  std::uint64_t sim_m = 4, sim_trials = 100000;
  std::string sim_kind = "iid", sim_decoder = "both", sim_codebook;
  add_common(simulate, true);
  simulate->add_option("--n", sim_n, "block length");
  simulate->add_option("--M", sim_m, "number of messages");
  simulate->add_option("--kind", sim_kind, "codebook ensemble")
      ->check(CLI::IsMember({"iid", "constant_composition"}));
  simulate->add_option("--decoder", sim_decoder, "decoder rule")
      ->check(CLI::IsMember({"stochastic", "max_metric", "both"}));
  simulate->add_option("--trials", sim_trials, "Monte Carlo trials (0 = exact only)");
  simulate->add_option("--codebook", sim_codebook, "load codebook JSON instead of generating");

  auto* bounds = app.add_subcommand("bounds", "achievability/converse sandwich");
  std::vector<int> bd_ns{4, 6};
  std::vector<std::uint64_t> bd_ms{2, 4, 8};
  std::vector<double> bd_ss{0.5, 0.75, 1.0};
  int bd_seeds = 10, bd_gammas = 8;
  std::uint64_t bd_trials = 0;
  add_common(bounds, true);
  bounds->add_option("--n", bd_ns, "block lengths");
  bounds->add_option("--M", bd_ms, "codebook sizes");
  bounds->add_option("--dist", dist_path, "input distribution JSON");
  bounds->add_option("--seeds", bd_seeds, "codebooks per configuration");
  bounds->add_option("--gamma-points", bd_gammas, "gamma grid size");
  bounds->add_option("--s", bd_ss, "tilt grid");
  bounds->add_option("--trials", bd_trials, "Monte Carlo trials per codebook");

  auto* gap = app.add_subcommand("gap", "capacity-gap upper bound");
  add_common(gap, true);
  gap->add_option("--dist", dist_path, "input distribution JSON");

  auto* bsc = app.add_subcommand("bsc", "closed form for BSC metric pairs");
  double bsc_p = 0.1, bsc_pp = 0.05;
  bool bsc_bits = false;
  add_common(bsc, false);
  bsc->add_option("--p", bsc_p, "channel crossover")->required();
  bsc->add_option("--pp", bsc_pp, "metric crossover")->required();
  bsc->add_flag("--bits", bsc_bits, "also report bits");

  auto* checks = app.add_subcommand("checks", "inequality and identity checks");
  std::vector<int> ck_ns{1, 2, 3, 4, 5, 6};
  std::vector<double> ck_eps{0.01, 0.05, 0.1, 0.5};
  int ck_pcn = 3, ck_pcseeds = 20;
  std::uint64_t ck_pcm = 4;
  add_common(checks, true);
  checks->add_option("--dist", dist_path, "input distribution JSON");
  checks->add_option("--n", ck_ns, "block lengths for the inequality checks");
  checks->add_option("--eps", ck_eps, "overshoot thresholds");
  checks->add_option("--pc-n", ck_pcn, "identity-check block length");
  checks->add_option("--pc-m", ck_pcm, "identity-check codebook size");
  checks->add_option("--pc-seeds", ck_pcseeds, "identity-check codebooks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
      return app.exit(e);
    std::cerr << "error code=UsageError detail=" << e.what() << "\n";
    return 2;
  }

  try {
    if (validate->parsed()) return cmd_validate(problem);

    Run run;
    run.subcommand = app.get_subcommands().front()->get_name();
    run.argv.assign(argv, argv + argc);
    run.seed = seed;
    run.budget = budget_override();
    run.format = format;
    run.dir = make_run_dir(out_root, run.subcommand);

    if (spectrum->parsed())
      return cmd_spectrum(run, problem, dist_path, sp_ns, sp_eps);
    if (rates->parsed())
      return cmd_rates(run, problem, rt_ks, rt_mode, rt_restarts, rt_bits);
    if (simulate->parsed())
      return cmd_simulate(run, problem, sim_n, sim_m, sim_kind, sim_decoder,
                          sim_trials, sim_codebook);
    if (bounds->parsed())
      return cmd_bounds(run, problem, dist_path, bd_ns, bd_ms, bd_seeds,
                        bd_gammas, bd_ss, bd_trials);
    if (gap->parsed()) return cmd_gap(run, problem, dist_path);
    if (bsc->parsed()) return cmd_bsc(run, bsc_p, bsc_pp, bsc_bits);
    if (checks->parsed())
      return cmd_checks(run, problem, dist_path, ck_ns, ck_eps, ck_pcn,
                        ck_pcm, ck_pcseeds);
    std::cerr << "error code=UsageError detail=no subcommand\n";
    return 2;
  } catch (const ApiError& e) {
    std::cerr << "error code=" << mm_status_name(e.status)
              << " status=" << static_cast<int>(e.status)
              << " detail=" << e.detail << "\n";
    return exit_code_for(e.status);
  } catch (const std::exception& e) {
    std::cerr << "error code=InternalError detail=" << e.what() << "\n";
    return 4;
  }
}
