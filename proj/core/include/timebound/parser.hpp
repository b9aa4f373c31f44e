#pragma once

#include <stdexcept>
#include <vector>

#include "timebound/ast.hpp"

namespace timebound {

/// Syntax or mode violation while parsing program text, annotation text, or
/// a cost-model file. oracle_missing distinguishes structurally valid
/// programs whose loops lack annotations required by the verification mode;
/// the command line maps that case to its own exit code.
class ParseError : public std::runtime_error {
 public:
  ParseError(SourceSpan span, const std::string& message,
             std::vector<std::string> expected = {}, bool oracle_missing = false)
      : std::runtime_error(message),
        span_(span),
        expected_(std::move(expected)),
        oracle_missing_(oracle_missing) {}

  SourceSpan span() const { return span_; }
  const std::vector<std::string>& expected() const { return expected_; }
  bool oracle_missing() const { return oracle_missing_; }

 private:
  SourceSpan span_;
  std::vector<std::string> expected_;
  bool oracle_missing_;
};

/// Verification mode declared by a leading `#mode: classic|amortized|exact`
/// comment line, if any.
std::optional<VerifMode> mode_header(const std::string& source);

/// Parses a full annotated program `{ P } S { Q | T }`. The mode governs
/// which loop forms and annotations are legal: it is the override when
/// given, else the file's #mode header, else classic. Loop ids are assigned
/// 0,1,2,... in source order.
AnnotatedProgram parse_program(const std::string& source,
                               std::optional<VerifMode> mode_override = {});

/// Parses a cost-model file: one `NAME = value` per line, `#` comments.
/// Unknown names and negative values are errors; unmentioned names cost 1.
CostModel parse_cost_model(const std::string& source);

/// Parses one arithmetic expression / one assertion, consuming the whole
/// text. Used by tests and by round-trip checks.
ArithPtr parse_arith(const std::string& source);
AssertPtr parse_assertion(const std::string& source);

/// Pretty-printers. Output reparses to a structurally equal tree; operators
/// are parenthesized only where precedence demands.
std::string pretty(const ArithPtr& e);
std::string pretty(const BoolPtr& e);
std::string pretty(const AssertPtr& a);
std::string pretty(const StmtPtr& s);
std::string pretty_print(const AnnotatedProgram& p);

}  // namespace timebound
