#include "treeprob/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "treeprob/core.hpp"
#include "treeprob/counting.hpp"
#include "treeprob/events.hpp"
#include "treeprob/montecarlo.hpp"
#include "treeprob/report.hpp"
#include "treeprob/verify.hpp"

namespace treeprob::cli {

namespace {

const std::vector<std::string> kRuleNames = {"alpha", "beta", "gamma", "delta"};
const std::vector<std::string> kModeNames = {"surjection", "function", "identity"};
const std::vector<std::string> kFormats = {"text", "json", "csv"};
const std::vector<std::string> kMatrices = {"l-prime", "m", "m-a", "n-a",
                                            "q-a", "m-d", "m-beta-prime"};
const std::vector<std::string> kSuites = {"theorem", "conjecture1", "conjecture2", "lemmas",
                                          "prop1"};

struct Config {
  std::string zeta = "alpha";
  int k = 0;
  int r = 0;
  std::vector<int> p;
  std::string mode = "surjection";
  std::string format = "text";
  std::string output;
  unsigned jobs = 1;
  std::uint64_t seed = 1;
  std::uint64_t trials = 100000;
  std::string matrix = "m";
  int a = 0;
  std::string d;
  std::string suite = "theorem";
  int k_min = 2;
  int k_max = 4;
  int r_max = 0;
};

// A flat result: one named value per field, kept in insertion order.
struct Record {
  std::vector<std::pair<std::string, Json>> json;
  std::vector<std::pair<std::string, std::string>> flat;
  std::vector<std::string> text;

  void add(const std::string& name, Json value, std::string flat_value) {
    json.emplace_back(name, std::move(value));
    flat.emplace_back(name, std::move(flat_value));
  }
  void add(const std::string& name, const std::string& value) { add(name, value, value); }
  void add(const std::string& name, long long value) { add(name, value, std::to_string(value)); }
  void add(const std::string& name, const Rational& value) {
    add(name, rational_to_json(value), to_string(value));
  }
  void add(const std::string& name, const BigCount& value) {
    add(name, value.get_str(), value.get_str());
  }
};

std::string join(const std::vector<int>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) s += ',';
    s += std::to_string(values[i]);
  }
  return s;
}

std::string render(const Record& record, const std::string& format) {
  if (format == "json") {
    Json j = Json::object();
    for (const auto& [name, value] : record.json) j[name] = value;
    return j.dump(2) + "\n";
  }
  if (format == "csv") {
    std::string header;
    std::string row;
    for (std::size_t i = 0; i < record.flat.size(); ++i) {
      if (i > 0) {
        header += ',';
        row += ',';
      }
      header += csv_field(record.flat[i].first);
      row += csv_field(record.flat[i].second);
    }
    return header + "\n" + row + "\n";
  }
  std::string out;
  for (const auto& line : record.text) out += line + "\n";
  return out;
}

std::string render(const GridReport& report, const std::string& format) {
  if (format == "json") return report_to_json(report).dump(2) + "\n";
  if (format == "csv") return report_to_csv(report);
  return report_to_text(report);
}

ArcRule rule_of(const Config& c) { return *parse_rule(c.zeta); }
AssignmentMode mode_of(const Config& c) { return *parse_mode(c.mode); }

OccupancyVector occupancy_of(const Config& c) {
  if (c.p.empty()) throw std::invalid_argument("--p is required");
  if (c.k != 0 && c.k != static_cast<int>(c.p.size())) {
    throw std::invalid_argument("--k " + std::to_string(c.k) + " does not match --p of length " +
                                std::to_string(c.p.size()));
  }
  if (c.p.size() < 2) throw std::invalid_argument("--p needs k >= 2 entries");
  for (int pj : c.p) {
    if (pj < 0 || pj > c.r) {
      throw std::domain_error("every p_j must lie in [0, r]; got p=(" + join(c.p) +
                              "), r=" + std::to_string(c.r));
    }
  }
  return OccupancyVector(c.p);
}

void require_r(const Config& c) {
  if (c.r < 1) throw std::invalid_argument("--r must be at least 1");
}

void add_parameters(Record& record, const Config& c, bool with_zeta, bool with_mode) {
  if (with_zeta) record.add("zeta", c.zeta);
  record.add("k", static_cast<long long>(c.p.size()));
  record.add("r", static_cast<long long>(c.r));
  record.add("p", Json(c.p), join(c.p));
  if (with_mode) record.add("mode", c.mode);
}

Record cmd_prob(const Config& c) {
  require_r(c);
  const OccupancyVector p = occupancy_of(c);
  const Rational value = exact_tree_probability(rule_of(c), p, c.r, mode_of(c));
  Record record;
  add_parameters(record, c, true, true);
  record.add("probability", value);
  record.text.push_back(to_string(value));
  return record;
}

Record cmd_pseudoforest(const Config& c) {
  require_r(c);
  const OccupancyVector p = occupancy_of(c);
  const Rational value = exact_pseudoforest_probability(rule_of(c), p, c.r, mode_of(c));
  Record record;
  add_parameters(record, c, true, true);
  record.add("probability", value);
  record.text.push_back(to_string(value));
  return record;
}

Record cmd_predict(const Config& c) {
  require_r(c);
  const OccupancyVector p = occupancy_of(c);
  const ArcRule rule = rule_of(c);
  if (cardinality_M(p, c.r) == 0) {
    throw std::domain_error("M_{p,r} is empty for p=(" + join(c.p) + "), r=" + std::to_string(c.r));
  }
  const Rational value = predicted_tree_probability(rule, p, c.r);
  Record record;
  add_parameters(record, c, true, false);
  record.add("basis", rule == ArcRule::delta ? "conjecture" : "theorem");
  record.add("prediction", value);
  record.text.push_back(to_string(value));
  return record;
}

Record cmd_count(const Config& c) {
  if (c.r < 0) throw std::invalid_argument("--r must be non-negative");
  const OccupancyVector p = occupancy_of(c);
  const BigCount s = cardinality_S(p, c.r);
  const BigCount m = cardinality_M(p, c.r);
  Record record;
  add_parameters(record, c, false, false);
  record.add("S", s);
  record.add("M", m);
  record.text.push_back("|S_{p,r}| = " + s.get_str());
  record.text.push_back("|M_{p,r}| = " + m.get_str());
  return record;
}

SubsetMask parse_d(const std::string& text, int k) {
  std::vector<int> elements;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw std::invalid_argument("--d expects comma-separated integers");
    if (value < 1 || value > k - 1) {
      throw std::invalid_argument("--d elements must lie in [1, k-1]");
    }
    elements.push_back(value);
  }
  return SubsetMask::of(k - 1, elements);
}

void require_rule(ArcRule rule, std::initializer_list<ArcRule> allowed, const std::string& matrix) {
  for (ArcRule a : allowed) {
    if (a == rule) return;
  }
  throw std::invalid_argument("--matrix " + matrix + " is not defined for --zeta " +
                              std::string(rule_name(rule)));
}

Record cmd_pdet(const Config& c) {
  require_r(c);
  if (mode_of(c) != AssignmentMode::surjection) {
    throw std::invalid_argument("pdet matrices live on the surjection space; use --mode surjection");
  }
  const OccupancyVector p = occupancy_of(c);
  const PaperSpace space = build_paper_space(p, c.r);
  const ArcRule rule = rule_of(c);
  const int k = p.k();
  Record record;
  record.add("matrix", c.matrix);
  Rational value;
  if (c.matrix == "l-prime") {
    require_rule(rule, {ArcRule::alpha, ArcRule::beta, ArcRule::gamma}, c.matrix);
    value = pdet(matrix_L_prime(rule, space));
    record.add("zeta", c.zeta);
  } else if (c.matrix == "m") {
    value = pdet(matrix_M(rule, space));
    record.add("zeta", c.zeta);
  } else if (c.matrix == "m-beta-prime") {
    value = pdet(matrix_M_beta_prime(space));
  } else if (c.matrix == "m-a" || c.matrix == "n-a") {
    require_rule(rule, {ArcRule::alpha, ArcRule::beta}, c.matrix);
    value = pdet(c.matrix == "m-a" ? matrix_M_a(rule, c.a, space) : matrix_N_a(rule, c.a, space));
    record.add("zeta", c.zeta);
    record.add("a", static_cast<long long>(c.a));
  } else if (c.matrix == "q-a") {
    value = pdet(matrix_Q_a(c.a, space));
    record.add("a", static_cast<long long>(c.a));
  } else {
    const SubsetMask d = parse_d(c.d, k);
    value = pdet(matrix_M_D(d, space));
    record.add("d", to_string(d));
  }
  record.add("k", static_cast<long long>(k));
  record.add("r", static_cast<long long>(c.r));
  record.add("p", Json(c.p), join(c.p));
  record.add("pdet", value);
  record.text.push_back(to_string(value));
  return record;
}

std::string fixed(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.10f", x);
  return buffer;
}

Record cmd_sample(const Config& c) {
  require_r(c);
  const OccupancyVector p = occupancy_of(c);
  const Estimate e =
      estimate_tree_probability(rule_of(c), p, c.r, mode_of(c), c.trials, c.seed, c.jobs);
  Record record;
  add_parameters(record, c, true, true);
  record.add("trials", Json(e.trials), std::to_string(e.trials));
  record.add("seed", Json(e.seed), std::to_string(e.seed));
  record.add("generator", std::string(kGeneratorName));
  record.add("estimate", Json(e.mean), fixed(e.mean));
  record.add("std_error", Json(e.std_error), fixed(e.std_error));
  record.text.push_back("estimate  " + fixed(e.mean));
  record.text.push_back("std_error " + fixed(e.std_error));
  record.text.push_back("trials    " + std::to_string(e.trials));
  record.text.push_back("seed      " + std::to_string(e.seed) + " (" +
                        std::string(kGeneratorName) + ")");
  return record;
}

GridReport cmd_verify(const Config& c, const CLI::App& sub) {
  GridOptions options;
  options.k_min = c.k_min;
  options.k_max = c.k_max;
  options.r_max = c.r_max;
  options.mode = mode_of(c);
  options.jobs = c.jobs;
  if (c.suite == "theorem") return verify_theorem(options);
  if (c.suite == "conjecture1") return verify_conjecture1(options);
  if (c.suite == "conjecture2") return verify_conjecture2(options);
  if (c.suite == "lemmas") return verify_pdet_lemmas(options);
  return verify_prop1(sub.count("--trials") > 0 ? c.trials : 200, c.seed);
}

void emit(const std::string& text, const Config& c, std::ostream& out) {
  if (c.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.output, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot open --output file " + c.output);
  file << text;
  if (!file.flush()) throw std::invalid_argument("cannot write --output file " + c.output);
}

void add_common(CLI::App* sub, Config& c, bool zeta, bool trials) {
  if (zeta) {
    sub->add_option("--zeta", c.zeta, "arc rule")->check(CLI::IsMember(kRuleNames));
  }
  sub->add_option("--k", c.k, "ground-set size; must equal the length of --p");
  sub->add_option("--r", c.r, "number of subsets in the tuple")->required();
  sub->add_option("--p", c.p, "occupancy vector, comma-separated (p_1,...,p_k)")
      ->required()
      ->delimiter(',');
  sub->add_option("--mode", c.mode, "assignment map class")->check(CLI::IsMember(kModeNames));
  if (trials) {
    sub->add_option("--trials", c.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
  }
}

void add_output(CLI::App* sub, Config& c) {
  sub->add_option("--format", c.format, "output format")->check(CLI::IsMember(kFormats));
  sub->add_option("--output", c.output, "write the result to this file instead of stdout");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Exact and sampled tree probabilities of random digraphs built from subset tuples",
               "treeprob"};
  app.require_subcommand(1);

  auto* prob = app.add_subcommand("prob", "exact tree probability by enumeration");
  add_common(prob, c, true, false);
  add_output(prob, c);

  auto* predict = app.add_subcommand("predict", "closed-form (or conjectured) tree probability");
  add_common(predict, c, true, false);
  add_output(predict, c);

  auto* count = app.add_subcommand("count", "cardinalities of S_{p,r} and M_{p,r}");
  add_common(count, c, false, false);
  add_output(count, c);

  auto* pdet_cmd = app.add_subcommand("pdet", "Pr-determinant of a named event matrix");
  add_common(pdet_cmd, c, true, false);
  pdet_cmd->add_option("--matrix", c.matrix, "matrix family")->check(CLI::IsMember(kMatrices));
  pdet_cmd->add_option("--a", c.a, "stage index for m-a, n-a and q-a");
  pdet_cmd->add_option("--d", c.d, "subset of [k-1] for m-d, comma-separated (may be empty)");
  add_output(pdet_cmd, c);

  auto* sample = app.add_subcommand("sample", "Monte Carlo estimate of the tree probability");
  add_common(sample, c, true, true);
  add_output(sample, c);

  auto* verify = app.add_subcommand("verify", "run an exhaustive verification suite");
  verify->add_option("--suite", c.suite, "suite name")->check(CLI::IsMember(kSuites));
  verify->add_option("--kmin", c.k_min, "smallest k in the grid");
  verify->add_option("--kmax", c.k_max, "largest k in the grid");
  verify->add_option("--rmax", c.r_max, "largest r in the grid (default k-1)");
  verify->add_option("--mode", c.mode, "assignment map class")->check(CLI::IsMember(kModeNames));
  verify->add_option("--trials", c.trials, "random cases for prop1 (default 200)");
  verify->add_option("--seed", c.seed, "random seed for prop1");
  verify->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
  add_output(verify, c);

  auto* pseudo = app.add_subcommand("pseudoforest",
                                    "exact probability that every cycle of the digraph is a loop");
  add_common(pseudo, c, true, false);
  add_output(pseudo, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (verify->parsed()) {
      const GridReport report = cmd_verify(c, *verify);
      emit(render(report, c.format), c, out);
      if (!report.all_passed()) {
        err << "verify: " << report.summary().fail << " cell(s) failed in suite " << report.suite
            << "\n";
        return kExitMismatch;
      }
      return kExitOk;
    }
    Record record;
    if (prob->parsed()) record = cmd_prob(c);
    else if (predict->parsed()) record = cmd_predict(c);
    else if (count->parsed()) record = cmd_count(c);
    else if (pdet_cmd->parsed()) record = cmd_pdet(c);
    else if (sample->parsed()) record = cmd_sample(c);
    else record = cmd_pseudoforest(c);
    emit(render(record, c.format), c, out);
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("treeprob");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace treeprob::cli
