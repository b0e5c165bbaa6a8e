// symerl: bounded symbolic verification of Core Erlang functions.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "symerl/driver.hpp"

namespace {

bool parse_fun(const std::string& s, symerl::FunName& out) {
  auto slash = s.rfind('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == s.size()) return false;
  std::string ar = s.substr(slash + 1);
  if (ar.find_first_not_of("0123456789") != std::string::npos || ar.size() > 3) return false;
  std::string name = s.substr(0, slash);
  if (name.size() >= 2 && name.front() == '\'' && name.back() == '\'') name = name.substr(1, name.size() - 2);
  out = {name, static_cast<unsigned>(std::stoul(ar))};
  return true;
}

symerl::VarId seed_from_env() {
  const char* s = std::getenv("SYMERL_SEED");
  if (!s || !*s) return 0;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    std::cerr << "warning: ignoring malformed SYMERL_SEED=" << s << '\n';
    return 0;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded symbolic verifier for sequential Core Erlang"};
  app.require_subcommand(1);

  CLI::App* verify = app.add_subcommand("verify", "Search for inputs that crash a function");
  std::string file, fun, skeleton = "general", format = "text";
  int bound = 20;
  std::size_t max_answers = 0;
  bool dump = false;
  symerl::VerifyOptions opts;
  verify->add_option("file", file, "Module source (.cerl-min)")->required();
  verify->add_option("--fun", fun, "Entry point NAME/ARITY")->required();
  verify->add_option("--bound", bound, "Step bound")->check(CLI::NonNegativeNumber);
  verify->add_option("--max-answers", max_answers, "Stop after K distinct answers")->check(CLI::PositiveNumber);
  verify->add_option("--skeleton", skeleton, "general | int-list:M | term:<patterns>");
  verify->add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}));
  verify->add_flag("--dump-facts", dump, "Print the translated function facts first");
  verify->add_option("--witness-depth", opts.sat.witness_depth, "Term depth for witness search")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--int-enum-bound", opts.limits.int_enum_bound, "Branching depth for integer search")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (!parse_fun(fun, opts.fun)) {
    std::cerr << "error: --fun expects NAME/ARITY, got '" << fun << "'\n";
    return 2;
  }
  auto sk = symerl::SkeletonSpec::parse(skeleton);
  if (!sk) {
    std::cerr << "error: --skeleton expects general, int-list:M or term:<patterns>, got '" << skeleton << "'\n";
    return 2;
  }
  opts.skeleton = *sk;
  opts.bound = bound;
  if (max_answers) opts.max_answers = max_answers;
  opts.seed = seed_from_env();

  if (dump) {
    std::ifstream in(file);
    std::stringstream ss;
    ss << in.rdbuf();
    auto pr = symerl::parse_module(ss.str());
    if (pr.ok()) {
      auto tr = symerl::translate_module(*pr.module);
      if (tr.table) std::cout << symerl::dump_facts(*tr.table);
    }
  }

  symerl::Verdict v = symerl::verify_file(file, opts);
  int rc = symerl::exit_code(v);
  if (rc == 2) {
    for (const auto& d : v.diagnostics) std::cerr << file << ":" << d.to_string() << '\n';
    return rc;
  }
  std::cout << (format == "json" ? symerl::render_json(v) : symerl::render_text(v));
  std::cerr << "elapsed: " << v.elapsed_seconds << " s\n";
  return rc;
}
