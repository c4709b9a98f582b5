// spcomb: command-line front end.
//
// JSON reports go to stdout, diagnostics to stderr.
// Exit codes: 0 pass, 1 identity or statistical failure, 2 usage or input error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spcomb/spcomb.hpp"

using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  return read_file(path);
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

// Integers beyond 2^53 do not survive a round trip through a double, so they
// are written as decimal strings.
json exact_integer(std::int64_t v) {
  constexpr std::int64_t kSafe = std::int64_t{1} << 53;
  if (v > kSafe || v < -kSafe) return std::to_string(v);
  return v;
}

// [lo, hi] for one dimension, [[lo...], [hi...]] or {"lo":..,"hi":..} in general.
spcomb::Box parse_box(const std::string& text) {
  const json j = spcomb::parse_json(text);
  if (j.is_object()) return spcomb::box_from_json(j);
  if (!j.is_array() || j.size() != 2) throw spcomb::FormatError("box must be [lo, hi] or [[lo...], [hi...]]");
  if (j[0].is_number() && j[1].is_number()) {
    return spcomb::Box(spcomb::Point{j[0].get<double>()}, spcomb::Point{j[1].get<double>()});
  }
  return spcomb::Box(spcomb::point_from_json(j[0]), spcomb::point_from_json(j[1]));
}

// Inline JSON, the shorthand indicator[lo,hi] / indicator[[lo..],[hi..]], or a file.
spcomb::TestFunction parse_phi(const std::string& text) {
  const std::string prefix = "indicator";
  if (text.rfind(prefix, 0) == 0) {
    const spcomb::Box box = parse_box(text.substr(prefix.size()));
    return spcomb::TestFunction::indicator_box(box);
  }
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return spcomb::test_function_from_json(spcomb::parse_json(text));
  return spcomb::test_function_from_json(spcomb::parse_json(read_file(text)));
}

std::vector<double> parse_sequence(const std::string& path) {
  const json j = spcomb::parse_json(read_input(path));
  if (!j.is_array()) throw spcomb::FormatError("'" + path + "' must hold a JSON array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
      throw spcomb::FormatError("'" + path + "' must hold finite numbers only");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

json estimate_json(const spcomb::Estimate& e, std::optional<double> target) {
  json j = {{"estimate", e.estimate}, {"stderr", e.std_error}, {"samples", e.samples}};
  if (target) {
    const double distance = e.sigma_distance(*target);
    j["target"] = *target;
    j["sigma_distance"] = distance;
    j["status"] = spcomb::to_string(spcomb::classify_sigma_distance(distance));
  }
  return j;
}

int exit_for(const json& j) { return j.value("status", "pass") == std::string("fail") ? kExitFail : kExitPass; }

// ---------------------------------------------------------------------------

int cmd_identities(const std::optional<std::string>& config_path) {
  spcomb::IdentityConfig config;
  if (config_path) config = spcomb::IdentityConfig::from_json(spcomb::parse_json(read_file(*config_path)));
  const spcomb::IdentityReport report = spcomb::run_identity_battery(config);
  emit(report.to_json());
  for (const auto& r : report.records) {
    if (!r.passed()) std::cerr << "identity " << r.name << " failed: max_rel_error " << r.max_rel_error << '\n';
  }
  return report.all_pass() ? kExitPass : kExitFail;
}

int cmd_stirling(std::optional<long long> n, std::optional<long long> k, std::optional<long long> table) {
  if (table) {
    if (n || k) throw UsageError("--table excludes --n and --k");
    if (*table < 0) throw spcomb::DomainError("stirling: negative argument");
    if (*table > static_cast<long long>(spcomb::kMaxStirlingN)) {
      throw spcomb::DomainError("stirling: n > " + std::to_string(spcomb::kMaxStirlingN) + " is not supported");
    }
    json unsigned_first = json::array(), signed_first = json::array(), second = json::array();
    for (long long i = 0; i <= *table; ++i) {
      json u = json::array(), s = json::array(), t = json::array();
      for (long long j = 0; j <= *table; ++j) {
        const bool lower = j <= i;
        u.push_back(exact_integer(lower ? spcomb::stirling_first_unsigned(i, j) : 0));
        s.push_back(exact_integer(lower ? spcomb::stirling_first(i, j) : 0));
        t.push_back(exact_integer(lower ? spcomb::stirling_second(i, j) : 0));
      }
      unsigned_first.push_back(u);
      signed_first.push_back(s);
      second.push_back(t);
    }
    emit({{"schema_version", spcomb::kSchemaVersion},
          {"table", *table},
          {"unsigned_first", unsigned_first},
          {"signed_first", signed_first},
          {"second", second}});
    return kExitPass;
  }
  if (!n || !k) throw UsageError("stirling needs --n and --k, or --table");
  emit({{"schema_version", spcomb::kSchemaVersion},
        {"n", *n},
        {"k", *k},
        {"unsigned_first", exact_integer(spcomb::stirling_first_unsigned(*n, *k))},
        {"signed_first", exact_integer(spcomb::stirling_first(*n, *k))},
        {"second", exact_integer(spcomb::stirling_second(*n, *k))}});
  return kExitPass;
}

int cmd_transform(const std::string& op, const std::vector<std::string>& inputs, std::optional<std::size_t> length) {
  const std::size_t arity = op == "star" ? 2 : 1;
  if (inputs.size() != arity) {
    throw UsageError("--op " + op + " takes " + std::to_string(arity) + " --in file(s), got " +
                     std::to_string(inputs.size()));
  }
  std::vector<spcomb::SequenceFn> seqs;
  for (const auto& path : inputs) seqs.push_back(spcomb::SequenceFn{parse_sequence(path), spcomb::ZeroTail{}});

  std::size_t len = seqs[0].values.size();
  if (op == "star") {
    const std::size_t la = seqs[0].values.size(), lb = seqs[1].values.size();
    len = (la == 0 || lb == 0) ? 0 : la + lb - 1;
  }
  if (length) len = *length;

  json out = json::array();
  for (std::size_t n = 0; n < len; ++n) {
    if (op == "k") {
      out.push_back(spcomb::seq_k(seqs[0], n));
    } else if (op == "kinv") {
      out.push_back(spcomb::seq_k_inverse(seqs[0], n));
    } else {
      out.push_back(spcomb::seq_star(seqs[0], seqs[1], n));
    }
  }
  emit(out);
  return kExitPass;
}

int cmd_sample_poisson(double intensity, const std::string& box, std::size_t samples, std::uint64_t seed,
                       const std::optional<std::string>& out_path, std::size_t threads) {
  if (samples == 0) throw UsageError("--samples must be positive");
  const spcomb::PoissonSpec spec{intensity, parse_box(box), seed};
  const auto batch = spcomb::sample_poisson_batch(spec, samples, threads);
  json configs = json::array();
  std::size_t total = 0;
  for (const auto& c : batch) {
    configs.push_back(spcomb::to_json_value(c));
    total += c.size();
  }
  json doc = {{"schema_version", spcomb::kSchemaVersion},
              {"intensity", intensity},
              {"window", spcomb::to_json_value(spec.window)},
              {"seed", seed},
              {"configurations", configs}};
  if (out_path) {
    std::ofstream out(*out_path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + *out_path + "'");
    out << doc.dump() << '\n';
    if (!out) throw UsageError("failed writing '" + *out_path + "'");
    emit({{"schema_version", spcomb::kSchemaVersion},
          {"out", *out_path},
          {"samples", samples},
          {"total_points", total}});
  } else {
    emit(doc);
  }
  return kExitPass;
}

int cmd_estimate(std::size_t order, const std::string& phi_text, double intensity, const std::string& box,
                 std::size_t samples, std::uint64_t seed, std::size_t threads) {
  if (samples == 0) throw UsageError("--samples must be positive");
  const spcomb::PoissonSpec spec{intensity, parse_box(box), seed};
  const spcomb::TestFunction phi = parse_phi(phi_text);
  const spcomb::Estimate e = spcomb::empirical_factorial_moment(spec, order, phi, samples, threads);
  json j = {{"schema_version", spcomb::kSchemaVersion},
            {"quantity", "factorial_moment"},
            {"order", order},
            {"intensity", intensity},
            {"seed", seed}};
  j.update(estimate_json(e, spcomb::poisson_factorial_moment_target(intensity, phi, order)));
  emit(j);
  return exit_for(j);
}

int cmd_bogoliubov_law(const std::string& law_text, double lambda) {
  const auto colon = law_text.find(':');
  if (colon == std::string::npos) throw UsageError("--law must be poisson:SIGMA or pmf:P0,P1,...");
  const std::string family = law_text.substr(0, colon);
  const std::string params = law_text.substr(colon + 1);

  std::optional<spcomb::DiscreteLaw> law;
  std::optional<double> target;
  json law_json;
  if (family == "poisson") {
    const json sigma = spcomb::parse_json(params);
    if (!sigma.is_number()) throw spcomb::FormatError("poisson intensity must be a number");
    const double s = sigma.get<double>();
    law = spcomb::DiscreteLaw::poisson(s);
    target = std::exp(s * lambda);
    law_json = {{"family", "poisson"}, {"intensity", s}};
  } else if (family == "pmf") {
    const json values = spcomb::parse_json("[" + params + "]");
    std::vector<double> pmf;
    for (const auto& v : values) pmf.push_back(spcomb::detail::number(v, "pmf value"));
    law = spcomb::DiscreteLaw::from_pmf(pmf);
    law_json = {{"family", "pmf"}, {"pmf", pmf}};
  } else {
    throw UsageError("unknown law family '" + family + "'");
  }

  const spcomb::HolomorphyProbe probe = spcomb::holomorphy_probe(*law, lambda);
  if (!std::isfinite(probe.at_lambda)) throw spcomb::TailTruncationError("bogoliubov series does not converge");
  json j = {{"schema_version", spcomb::kSchemaVersion},
            {"quantity", "bogoliubov_sequence"},
            {"law", law_json},
            {"lambda", lambda},
            {"value", probe.at_lambda},
            {"probe",
             {{"reflection", -2.0 - lambda},
              {"value_at_reflection",
               std::isfinite(probe.at_reflection) ? json(probe.at_reflection) : json(nullptr)},
              {"both_finite", probe.both_finite}}}};
  if (target) {
    const double rel = spcomb::relative_error(probe.at_lambda, *target);
    j["target"] = *target;
    j["rel_error"] = rel;
    j["status"] = rel <= 1e-9 ? "pass" : "fail";
  }
  emit(j);
  return exit_for(j);
}

int cmd_bogoliubov_mc(const std::string& phi_text, double intensity, const std::string& box, std::size_t samples,
                      std::uint64_t seed, std::size_t threads) {
  if (samples == 0) throw UsageError("--samples must be positive");
  const spcomb::PoissonSpec spec{intensity, parse_box(box), seed};
  const spcomb::TestFunction phi = parse_phi(phi_text);
  const spcomb::Estimate e = spcomb::empirical_bogoliubov(spec, phi, samples, threads);
  json j = {{"schema_version", spcomb::kSchemaVersion},
            {"quantity", "bogoliubov"},
            {"intensity", intensity},
            {"seed", seed}};
  j.update(estimate_json(e, spcomb::poisson_bogoliubov_target(intensity, phi)));
  emit(j);
  return exit_for(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial combinatorics toolkit: identity batteries, Stirling numbers, sequence transforms, "
               "Poisson sampling and estimation."};
  app.require_subcommand(1);
  app.fallthrough();
  std::size_t threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all hardware threads)")->capture_default_str();

  // identities
  auto* identities = app.add_subcommand("identities", "Run the exact-identity battery");
  std::optional<std::string> config_path;
  identities->add_option("--config", config_path, "JSON config file (all fields optional)");

  // stirling
  auto* stirling = app.add_subcommand("stirling", "Exact Stirling numbers");
  std::optional<long long> st_n, st_k, st_table;
  stirling->add_option("--n", st_n, "n (at most 20)");
  stirling->add_option("--k", st_k, "k");
  stirling->add_option("--table", st_table, "All values for 0 <= k <= n <= N as (N+1)x(N+1) matrices");

  // transform
  auto* transform = app.add_subcommand("transform", "K, K^-1 or star on finitely supported sequences");
  std::string op;
  std::vector<std::string> inputs;
  std::optional<std::size_t> length;
  transform->add_option("--op", op, "k | kinv | star")->required()->check(CLI::IsMember({"k", "kinv", "star"}));
  transform->add_option("--in", inputs, "Input JSON array file(s), '-' for stdin")->required();
  transform->add_option("--length", length, "Number of output terms (default: input length, la+lb-1 for star)");

  // sample-poisson
  auto* sample = app.add_subcommand("sample-poisson", "Sample a Poisson point process in a box");
  double sp_intensity = 0.0;
  std::string sp_box;
  std::size_t sp_samples = 1;
  std::uint64_t sp_seed = 42;
  std::optional<std::string> sp_out;
  sample->add_option("--intensity", sp_intensity, "Intensity sigma > 0")->required();
  sample->add_option("--box", sp_box, "Window: [lo,hi] or [[lo...],[hi...]]")->required();
  sample->add_option("--samples", sp_samples, "Number of configurations")->capture_default_str();
  sample->add_option("--seed", sp_seed, "Seed")->capture_default_str();
  sample->add_option("--out", sp_out, "Write the batch to this file instead of stdout");

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Monte Carlo factorial moment against the Poisson target");
  std::size_t es_order = 1;
  std::string es_phi, es_box;
  double es_intensity = 0.0;
  std::size_t es_samples = 10000;
  std::uint64_t es_seed = 42;
  estimate->add_option("--order", es_order, "Moment order n")->capture_default_str();
  estimate->add_option("--phi", es_phi, "Test function: JSON, indicator[lo,hi], or a JSON file")->required();
  estimate->add_option("--intensity", es_intensity, "Intensity sigma > 0")->required();
  estimate->add_option("--box", es_box, "Window: [lo,hi] or [[lo...],[hi...]]")->required();
  estimate->add_option("--samples", es_samples, "Monte Carlo samples (at least 100)")->capture_default_str();
  estimate->add_option("--seed", es_seed, "Seed")->capture_default_str();

  // bogoliubov
  auto* bogoliubov = app.add_subcommand("bogoliubov", "Bogoliubov functional, Monte Carlo or sequence form");
  std::string bg_phi, bg_box, bg_law;
  double bg_intensity = 0.0, bg_lambda = 0.0;
  std::size_t bg_samples = 10000;
  std::uint64_t bg_seed = 42;
  auto* bg_phi_opt = bogoliubov->add_option("--phi", bg_phi, "Test function (Monte Carlo form)");
  auto* bg_intensity_opt = bogoliubov->add_option("--intensity", bg_intensity, "Intensity sigma > 0");
  auto* bg_box_opt = bogoliubov->add_option("--box", bg_box, "Window");
  bogoliubov->add_option("--samples", bg_samples, "Monte Carlo samples (at least 100)")->capture_default_str();
  bogoliubov->add_option("--seed", bg_seed, "Seed")->capture_default_str();
  auto* bg_law_opt = bogoliubov->add_option("--law", bg_law, "poisson:SIGMA or pmf:P0,P1,... (sequence form)");
  auto* bg_lambda_opt = bogoliubov->add_option("--lambda", bg_lambda, "lambda (sequence form)");
  bg_law_opt->excludes(bg_phi_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*identities) return cmd_identities(config_path);
    if (*stirling) return cmd_stirling(st_n, st_k, st_table);
    if (*transform) return cmd_transform(op, inputs, length);
    if (*sample) return cmd_sample_poisson(sp_intensity, sp_box, sp_samples, sp_seed, sp_out, threads);
    if (*estimate) return cmd_estimate(es_order, es_phi, es_intensity, es_box, es_samples, es_seed, threads);
    if (*bogoliubov) {
      if (*bg_law_opt) {
        if (!*bg_lambda_opt) throw UsageError("--law needs --lambda");
        return cmd_bogoliubov_law(bg_law, bg_lambda);
      }
      if (!*bg_phi_opt || !*bg_intensity_opt || !*bg_box_opt) {
        throw UsageError("bogoliubov needs --law and --lambda, or --phi, --intensity and --box");
      }
      return cmd_bogoliubov_mc(bg_phi, bg_intensity, bg_box, bg_samples, bg_seed, threads);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const spcomb::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
