#pragma once

// verify: parse, translate, build input skeletons, run the symbolic search,
// then concretize every answer and confirm it by ground execution.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symerl/check.hpp"
#include "symerl/frontend.hpp"
#include "symerl/linarith.hpp"
#include "symerl/translator.hpp"

namespace symerl {

struct SkeletonSpec {
  enum class Kind { General, IntList, Terms };

  Kind kind = Kind::General;
  int max_length = 0;     // IntList
  std::string patterns;   // Terms: comma-separated pattern syntax

  // "general", "int-list:M" or "term:<patterns>"; nullopt if malformed.
  static std::optional<SkeletonSpec> parse(const std::string& text);
  std::string to_string() const;
};

// One concrete skeleton: the inputs handed to run.
struct Skeleton {
  std::string label;  // "general", "int-list length 3", "term"
  std::vector<Term> inputs;
};

// Lengths m, m-1, ..., 0, each a proper list of fresh int literals.
std::vector<Skeleton> int_list_skeletons(int m, VarPool& pool);
// One fresh variable per formal, named after it.
Skeleton general_skeleton(const std::vector<std::string>& params, VarPool& pool);
// Pattern variables become fresh holes; repeated names share a hole.
Skeleton pattern_skeleton(const std::vector<Pattern>& pats, VarPool& pool);

struct VerifyOptions {
  FunName fun;
  int bound = 20;
  std::optional<std::size_t> max_answers;
  SkeletonSpec skeleton;
  SatOptions sat;
  LinLimits limits;
  VarId seed = 0;  // first fresh variable number
};

struct Answer {
  enum class Status { Confirmed, Unconfirmed };

  std::string error;
  std::vector<std::string> input;        // rendered skeleton terms, one per argument
  std::vector<std::string> constraints;  // residual constraints
  std::optional<std::vector<Term>> witness;
  Status status = Status::Unconfirmed;

  // "In=[...], Err=name, constraint, ..."
  std::string text() const;
};

struct SkeletonReport {
  std::string label;
  std::size_t answers = 0;
  bool bound_exhausted = false;
  bool stopped = false;  // cut short by --max-answers
};

struct Verdict {
  std::vector<Answer> answers;
  bool certified = false;  // no answers and nothing cut by the bound
  bool bound_exhausted = false;
  int bound = 0;
  double elapsed_seconds = 0;
  std::vector<SkeletonReport> skeletons;
  std::vector<Diagnostic> diagnostics;
  FunName fun;
};

Verdict verify_source(const std::string& source, const VerifyOptions& opts);
// Reads the file first; an unreadable file is a diagnostic.
Verdict verify_file(const std::string& path, const VerifyOptions& opts);
// For callers that already hold a translated table.
Verdict verify_table(const FunTable& tbl, const VerifyOptions& opts);

// Text report. Deterministic: no timing.
std::string render_text(const Verdict& v);
std::string render_json(const Verdict& v);
// Parses render_json output. Witness terms are read back from the lit/cons
// notation. Throws std::runtime_error on malformed input.
Verdict read_json_report(const std::string& json);

// 0 certified, 1 answers found, 2 diagnostics, 3 no answers but the search
// was cut by the bound.
int exit_code(const Verdict& v);

// Erlang-syntax rendering of a ground value, e.g. [1,a].
std::string erlang_value(const Term& t);
// Parses render_term output for ground terms. Throws std::runtime_error.
Term parse_ground_term(const std::string& text);

}  // namespace symerl
