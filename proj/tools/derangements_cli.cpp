// derangements_cli: run verification suites and compute single quantities.
//
//   derangements_cli verify <suite|all> [--json PATH] [--csv PATH] [--seed N] [--trials N] [--cap N] [--jobs N]
//   derangements_cli compute <quantity> [--n N] [--q Q] [--b B] [--t T] [--json PATH]
//
// Exit codes: 0 all pass, 1 a check failed, 2 usage error, 3 resource cap exceeded.

#include "derangements/report.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>

namespace {

using namespace derangements;

constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

Rational parse_rational(const std::string& s) {
  Rational r;
  if (r.set_str(s, 10) != 0) throw DomainError("not a rational number: " + s);
  r.canonicalize();
  if (r.get_den() == 0) throw DomainError("zero denominator: " + s);
  return r;
}

struct ComputeArgs {
  std::string quantity;
  unsigned n = 4;
  std::uint64_t q = 2;
  unsigned b = 2;
  std::string t = "1/2";
  std::string group = "sym";
  bool base_only = false;
};

const std::vector<std::string> kQuantities = {"coeff",        "prop-cycles-div", "gl-class-count", "rss-prop",
                                              "option-prop",  "appendix-bound",  "derangement-prop", "union-prop"};

struct Computed {
  Rational value;
  std::map<std::string, std::string> params;
};

Computed compute(const ComputeArgs& a, const verify::Options& o) {
  Computed c;
  auto p = [&](const char* k, const std::string& v) { c.params[k] = v; };
  const std::string n = std::to_string(a.n), q = std::to_string(a.q), b = std::to_string(a.b);
  if (a.quantity == "coeff") {
    // coefficient of u^n in (1 - u^b)^{-t}
    if (a.b < 1) throw DomainError("b must be positive");
    if (a.n > o.order) throw ResourceError("n exceeds the series truncation order", o.order);
    auto s = qseries::series_subst_power(qseries::binomial_series(parse_rational(a.t), a.n), a.b);
    c.value = s[a.n];
    p("n", n), p("b", b), p("t", a.t);
  } else if (a.quantity == "prop-cycles-div") {
    c.value = weyl::exact_prop_all_cycles_div(a.n, a.b);
    p("n", n), p("b", b);
  } else if (a.quantity == "gl-class-count") {
    c.value = Rational(glclasses::class_count(a.n, a.q));
    p("n", n), p("q", q);
  } else if (a.quantity == "rss-prop") {
    c.value = glclasses::proportion_satisfying(a.n, a.q, glclasses::is_rss);
    p("n", n), p("q", q);
  } else if (a.quantity == "option-prop") {
    const unsigned bb = a.b;
    c.value = glclasses::proportion_satisfying(a.n, a.q, [bb](const auto& L) { return glclasses::satisfies_option(L, bb); });
    p("n", n), p("q", q), p("b", b);
  } else if (a.quantity == "appendix-bound") {
    c.value = glclasses::appendix_bound_coeff(a.n, a.q, a.b);
    p("n", n), p("q", q), p("b", b);
  } else if (a.quantity == "derangement-prop" || a.quantity == "union-prop") {
    if (a.quantity == "derangement-prop" && a.group == "sym") {
      c.value = weyl::sym_derangements(a.n).proportion;
      p("n", n), p("group", "sym");
    } else {
      // GL(n,q) acting on the cosets of the extension-field subgroup GL(n/b,q^b).b
      if (a.b < 2 || a.n % a.b != 0) throw DomainError("need b >= 2 dividing n");
      auto E = brute::extension_field_subgroup(a.n / a.b, a.q, a.b, o.cap);
      auto G = brute::build_classical(brute::GroupKind::GL, a.n, a.q, o.cap);
      auto cls = group::conjugacy_classes(G.group);
      const auto& H = a.base_only ? E.H0.elements() : E.H.elements();
      c.value = a.quantity == "union-prop" ? brute::union_of_conjugates_proportion(G.group, cls, H)
                                           : brute::coset_derangement_proportion(G.group, cls, H);
      p("n", n), p("q", q), p("b", b), p("subgroup", a.base_only ? "GL(n/b,q^b)" : "GL(n/b,q^b).b");
    }
  } else {
    throw DomainError("unknown quantity: " + a.quantity);
  }
  return c;
}

void print_table(const std::vector<verify::CheckResult>& results) {
  for (const auto& r : results) {
    std::cout << std::left << std::setw(9) << verify::status_name(r.status) << std::setw(34) << r.id << ' ' << r.value;
    if (!r.bound.empty()) std::cout << "  [vs " << r.bound << "]";
    std::cout << "  (" << std::fixed << std::setprecision(0) << r.elapsed_ms << " ms)";
    std::cout.unsetf(std::ios::fixed);
    if (r.status != verify::Status::pass && !r.detail.empty()) std::cout << "\n         " << r.detail;
    std::cout << '\n';
  }
}

bool write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream f(path);
  if (!f) {
    std::cerr << "cannot write " << path << '\n';
    return false;
  }
  body(f);
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact counting and brute-force verification for derangements in classical groups"};
  app.require_subcommand(1);
  verify::Options opts;
  std::string json_path, csv_path;
  app.add_option("--seed", opts.seed, "seed for randomized checks")->capture_default_str();
  app.add_option("--trials", opts.trials, "Monte-Carlo trials per estimate")->capture_default_str();
  app.add_option("--cap", opts.cap, "element cap for enumerated groups")->capture_default_str();
  app.add_option("--order", opts.order, "series truncation order")->capture_default_str();
  app.add_option("--jobs", opts.jobs, "worker threads")->capture_default_str();
  app.add_option("--json", json_path, "write a JSON report");
  app.add_option("--csv", csv_path, "write a CSV report");

  std::string suite;
  auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
  verify_cmd->fallthrough();
  std::vector<std::string> suites = verify::suite_names();
  suites.push_back("all");
  verify_cmd->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suites));
  bool quiet = false;
  verify_cmd->add_flag("--quiet", quiet, "print only the summary line");

  ComputeArgs ca;
  auto* compute_cmd = app.add_subcommand("compute", "compute a single exact quantity");
  compute_cmd->fallthrough();
  compute_cmd->add_option("quantity", ca.quantity, "quantity name")->required()->check(CLI::IsMember(kQuantities));
  compute_cmd->add_option("--n", ca.n, "dimension / degree")->capture_default_str();
  compute_cmd->add_option("--q", ca.q, "field order")->capture_default_str();
  compute_cmd->add_option("--b", ca.b, "divisor b")->capture_default_str();
  compute_cmd->add_option("--t", ca.t, "exponent t of (1-u^b)^{-t}")->capture_default_str();
  compute_cmd->add_option("--group", ca.group, "sym (natural S_n action) or gl (cosets of the extension-field subgroup)")
      ->check(CLI::IsMember({"sym", "gl"}))
      ->capture_default_str();
  compute_cmd->add_flag("--base-only", ca.base_only, "use GL(n/b,q^b) without the Frobenius");

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
    if (*verify_cmd) {
      auto checks = verify::checks_for(suite);
      auto results = verify::run_checks(checks, opts);
      if (!quiet) print_table(results);
      std::size_t pass = 0;
      for (const auto& r : results) pass += r.status == verify::Status::pass;
      std::cout << suite << ": " << pass << "/" << results.size() << " checks passed\n";
      if (!json_path.empty() &&
          !write_file(json_path, [&](std::ostream& os) { os << report::to_json(suite, results).dump(2) << '\n'; }))
        return kExitUsage;
      if (!csv_path.empty() && !write_file(csv_path, [&](std::ostream& os) { report::write_csv(os, results); }))
        return kExitUsage;
      return verify::exit_code(results);
    }
    const Computed c = compute(ca, opts);
    std::cout << to_fraction_string(c.value) << "  ~ " << to_decimal_string(c.value) << '\n';
    if (!json_path.empty()) {
      nlohmann::json j{{"version", report::kSchemaVersion},
                       {"quantity", ca.quantity},
                       {"params", c.params},
                       {"value", to_fraction_string(c.value)},
                       {"decimal", to_decimal_string(c.value)}};
      if (!write_file(json_path, [&](std::ostream& os) { os << j.dump(2) << '\n'; })) return kExitUsage;
    }
    return 0;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
