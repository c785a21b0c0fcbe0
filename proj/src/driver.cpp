// Copyright (c) volcount contributors.
// SPDX-License-Identifier: Apache-2.0
#include "volcount/driver.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

#include "volcount/enumerator.hpp"
#include "volcount/exact.hpp"
#include "volcount/frontends.hpp"
#include "volcount/polyvest.hpp"

namespace volcount {

namespace {

template <typename T>
T parse_number(std::string_view flag, std::string_view text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw UsageError("bad value '" + std::string(text) + "' for " + std::string(flag));
  return value;
}

double parse_seconds(std::string_view text) {
  try {
    std::size_t used = 0;
    double v = std::stod(std::string(text), &used);
    if (used != text.size()) throw UsageError("");
    return v;
  } catch (const std::exception&) {
    throw UsageError("bad value '" + std::string(text) + "' for --timeout");
  }
}

// Runs body(i) for i in [0, count) on up to `threads` workers. Exceptions
// are rethrown after all workers stop, lowest index first.
template <typename Body>
void parallel_for(int count, int threads, Body body) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> failures(count);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < std::min(threads, count); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);
}

std::uint64_t bunch_key(std::uint64_t seed, int index) { return seed ^ static_cast<std::uint64_t>(index); }

}  // namespace

std::string usage_text() {
  return "usage: volcount [options] FILE\n"
         "\n"
         "FILE is an Enhanced DIMACS file, or SMT-LIBv2 when it ends in .smt2.\n"
         "\n"
         "backends (combinable; default -P):\n"
         "  -P              estimate the volume by Monte-Carlo sampling\n"
         "  -V              compute the exact volume\n"
         "  -L              count integer solutions\n"
         "\n"
         "options:\n"
         "  -w=N            word length; every numeric variable lies in\n"
         "                  [-2^(N-1), 2^(N-1)-1]; 0 disables the box (default 8)\n"
         "  -maxc=N         maximum sampling coefficient (default 1600)\n"
         "  -minc=N         minimum sampling coefficient (default 40)\n"
         "  --seed=N        random seed (default 0)\n"
         "  --burnin=N      discarded walk steps at the start of each phase (default 0)\n"
         "  --json          print the report as JSON\n"
         "  --timeout=SEC   give up after SEC seconds (exit status 4)\n"
         "  --help          show this text\n"
         "\n"
         "VOLCOUNT_THREADS=N processes bunches on N threads (unset or 0: sequential).\n";
}

CliOptions parse_cli(const std::vector<std::string>& args) {
  CliOptions out;
  bool any_backend = false;
  bool have_input = false;
  for (const std::string& arg : args) {
    std::string_view a = arg;
    auto value_of = [&](std::string_view prefix) -> std::optional<std::string_view> {
      if (a.substr(0, prefix.size()) == prefix) return a.substr(prefix.size());
      return std::nullopt;
    };
    if (a == "-P") {
      out.config.estimate = any_backend = true;
    } else if (a == "-V") {
      out.config.exact_volume = any_backend = true;
    } else if (a == "-L") {
      out.config.integer_count = any_backend = true;
    } else if (a == "--help" || a == "-h") {
      out.help = true;
    } else if (a == "--json") {
      out.config.output = OutputMode::Json;
    } else if (auto v = value_of("-w=")) {
      out.config.word_length = parse_number<int>("-w", *v);
    } else if (auto v = value_of("-maxc=")) {
      out.config.max_coeff = parse_number<std::int64_t>("-maxc", *v);
    } else if (auto v = value_of("-minc=")) {
      out.config.min_coeff = parse_number<std::int64_t>("-minc", *v);
    } else if (auto v = value_of("--seed=")) {
      out.config.seed = parse_number<std::uint64_t>("--seed", *v);
    } else if (auto v = value_of("--burnin=")) {
      out.config.burnin = parse_number<int>("--burnin", *v);
    } else if (auto v = value_of("--timeout=")) {
      out.config.timeout_seconds = parse_seconds(*v);
    } else if (!a.empty() && a.front() == '-' && a != "-") {
      throw UsageError("unknown option '" + arg + "'");
    } else {
      if (have_input) throw UsageError("more than one input file");
      out.input = arg;
      have_input = true;
    }
  }
  if (out.help) return out;
  if (!any_backend) out.config.estimate = true;
  out.config.validate();
  if (!have_input) throw UsageError("missing input file");
  return out;
}

TwoRoundPlan two_round_sizes(const std::vector<double>& volumes, long s_min, long s_max) {
  TwoRoundPlan plan;
  plan.volumes = volumes;
  plan.s_min = s_min;
  plan.s_max = s_max;
  for (double v : volumes) plan.v_max = std::max(plan.v_max, v);
  for (double v : volumes) {
    double s = plan.v_max > 0 ? 2.0 * static_cast<double>(s_max) * v / plan.v_max : 0.0;
    if (s <= static_cast<double>(s_min)) {
      plan.sizes.push_back(0);
      plan.skip.push_back(1);
      continue;
    }
    plan.sizes.push_back(s >= static_cast<double>(s_max) ? s_max : std::max(1L, std::lround(s)));
    plan.skip.push_back(0);
  }
  return plan;
}

Report run(const SolverConfig& config, const Formula& formula, const Deadline& deadline) {
  if (config.integer_count && formula.numeric_kind == NumericKind::Real)
    throw UsageError("-L needs integer variables; the formula declares Real");
  const auto started = std::chrono::steady_clock::now();

  Report report;
  report.config = config;
  report.bool_vars = formula.num_bool_vars;
  report.clauses = static_cast<int>(formula.clauses.size());
  report.numeric_vars = formula.num_numeric_vars;
  report.linear_constraints = static_cast<int>(formula.atoms.size());
  report.numeric_kind = formula.numeric_kind;

  EnumerationResult enumeration = enumerate_bunches(formula, config, deadline);
  report.theory_conflicts = enumeration.theory_conflicts;
  const int count = static_cast<int>(enumeration.bunches.size());
  std::vector<BunchPolytope> polytopes;
  for (int i = 0; i < count; ++i) {
    BunchRecord rec;
    rec.index = i;
    rec.bunch = enumeration.bunches[i];
    rec.multiplier = bunch_multiplier(rec.bunch);
    polytopes.push_back(bunch_polytope(rec.bunch, formula, config));
    report.bunches.push_back(std::move(rec));
  }
  const int threads = config.threads;

  auto guarded = [&](BunchRecord& rec, auto&& work) {
    try {
      work();
    } catch (const TimeoutError&) {
      throw;
    } catch (const std::exception& e) {
      rec.errors.push_back(e.what());
    }
  };

  if (config.exact_volume || config.integer_count) {
    parallel_for(count, threads, [&](int i) {
      BunchRecord& rec = report.bunches[i];
      if (config.exact_volume)
        guarded(rec, [&] { rec.exact_volume = exact_volume(polytopes[i].polytope, deadline); });
      if (config.integer_count)
        guarded(rec, [&] {
          rec.count = count_integer_points(polytopes[i].polytope, polytopes[i].deferred_neqs, deadline);
        });
    });
  }

  if (config.estimate) {
    const int n = formula.num_numeric_vars;
    const int l = n > 0 ? phase_count(n) : 0;
    report.phases = l;
    const long s_min = static_cast<long>(config.min_coeff) * std::max(l, 1);
    const long s_max = static_cast<long>(config.max_coeff) * std::max(l, 1);
    std::vector<std::optional<RoundedPolytope>> rounded(count);

    parallel_for(count, threads, [&](int i) {
      BunchRecord& rec = report.bunches[i];
      rec.estimate.emplace();
      const std::size_t before = rec.errors.size();
      guarded(rec, [&] {
        EstimateRecord& est = *rec.estimate;
        if (n == 0) {
          est.round1 = est.value = polytopes[i].polytope.empty ? 0.0 : 1.0;
          est.zero_volume = true;
          return;
        }
        rounded[i] = round_polytope(polytopes[i].polytope, deadline);
        if (!rounded[i]) {
          est.zero_volume = true;
          return;
        }
        CounterRng rng(bunch_key(config.seed, i), 0);
        EstimateResult r = estimate_volume(*rounded[i], s_min, rng, config.burnin, deadline);
        est.round1 = est.value = r.volume;
        est.samples = s_min;
        est.fresh_points = r.fresh_total;
      });
      if (rec.errors.size() > before) rec.estimate->failed = true;
    });

    std::vector<double> first(count, 0.0);
    for (int i = 0; i < count; ++i)
      if (!report.bunches[i].estimate->failed) first[i] = report.bunches[i].estimate->round1;
    TwoRoundPlan plan = two_round_sizes(first, s_min, s_max);

    parallel_for(count, threads, [&](int i) {
      BunchRecord& rec = report.bunches[i];
      EstimateRecord& est = *rec.estimate;
      if (est.failed || !rounded[i]) return;
      if (plan.skip[i]) {
        est.skipped = true;
        return;
      }
      const std::size_t before = rec.errors.size();
      guarded(rec, [&] {
        CounterRng rng(bunch_key(config.seed, i), 1);
        EstimateResult r = estimate_volume(*rounded[i], plan.sizes[i], rng, config.burnin, deadline);
        est.value = r.volume;
        est.samples = plan.sizes[i];
        est.fresh_points = r.fresh_total;
      });
      if (rec.errors.size() > before) est.failed = true;
    });

    long sampled = 0;
    double coefficient_sum = 0;
    for (const auto& rec : report.bunches) {
      if (!rec.estimate || rec.estimate->samples == 0) continue;
      ++sampled;
      coefficient_sum += static_cast<double>(rec.estimate->samples) / l;
    }
    report.average_coefficient = sampled > 0 ? coefficient_sum / static_cast<double>(sampled) : 0.0;
  }

  // Totals in bunch order so the sum never depends on scheduling.
  bool estimate_ok = config.estimate, exact_ok = config.exact_volume, count_ok = config.integer_count;
  double estimate_sum = 0, exact_sum = 0;
  BigInt count_sum = 0;
  for (const auto& rec : report.bunches) {
    const double mult = to_double(rec.multiplier);
    if (config.estimate) {
      if (rec.estimate && !rec.estimate->failed) {
        estimate_sum += rec.estimate->value * mult;
      } else {
        estimate_ok = false;
      }
    }
    if (config.exact_volume) {
      if (rec.exact_volume) {
        exact_sum += *rec.exact_volume * mult;
      } else {
        exact_ok = false;
      }
    }
    if (config.integer_count) {
      if (rec.count) {
        count_sum += *rec.count * rec.multiplier;
      } else {
        count_ok = false;
      }
    }
    for (const auto& e : rec.errors) report.errors.push_back("bunch " + std::to_string(rec.index) + ": " + e);
  }
  if (estimate_ok) report.estimate_total = estimate_sum;
  if (exact_ok) report.exact_total = exact_sum;
  if (count_ok) {
    report.count_total = count_sum;
    if (config.word_length > 0) {
      const unsigned bits = static_cast<unsigned>(config.word_length * formula.num_numeric_vars);
      report.frequency = to_double(Rational(count_sum, pow2(bits)));
    }
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    CliOptions opts = parse_cli(args);
    if (opts.help) {
      out << usage_text();
      return 0;
    }
    if (const char* env = std::getenv("VOLCOUNT_THREADS"); env && *env)
      opts.config.threads = parse_number<int>("VOLCOUNT_THREADS", env);
    if (!std::filesystem::exists(opts.input))
      throw UsageError("input file '" + opts.input.string() + "' not found");
    Deadline deadline = Deadline::after_seconds(opts.config.timeout_seconds);
    Formula formula = parse_file(opts.input);
    Report report = run(opts.config, formula, deadline);
    report.input = opts.input.filename().string();
    out << (opts.config.output == OutputMode::Json ? render_json(report) : render_text(report));
    if (!report.errors.empty()) {
      for (const auto& e : report.errors) err << "volcount: " << e << '\n';
      return 3;
    }
    return 0;
  } catch (const UsageError& e) {
    err << "volcount: " << e.what() << "\n(see --help)\n";
    return 1;
  } catch (const ParseError& e) {
    err << "volcount: parse error: " << e.what() << '\n';
    return 2;
  } catch (const TimeoutError& e) {
    err << "volcount: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    err << "volcount: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace volcount
