#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace luset {

struct SourceSpan {
  std::string file;
  int line = 1;
  int col = 1;
  int end_line = 1;
  int end_col = 1;
};

enum class ErrorKind {
  SyntaxError,
  DuplicateNode,
  DuplicateDeclaration,
  DuplicateDefinition,
  MissingDefinition,
  UndefinedVariable,
  AssignToInput,
  UnknownNode,
  RecursiveCall,
  ArityMismatch,
  TypeMismatch,
  ClockMismatch,
  CausalityCycle,
  ClockedValueMismatch,
  DivByZero,
  UnboundVar,
  UnboundTypeVar,
  MultipleDefiningConstraints,
  InvalidLattice,
  InvalidInput,
};

std::string_view to_string(ErrorKind kind);

struct Diagnostic {
  ErrorKind kind = ErrorKind::SyntaxError;
  SourceSpan span;
  std::string node;
  int equation = -1;  // index within the node, -1 when not tied to one
  std::string message;
};

// file:line:col: message
std::string format(const Diagnostic& d);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {
    diag_.kind = kind;
    diag_.message = message;
  }
  explicit Error(Diagnostic d)
      : std::runtime_error(d.message), kind_(d.kind), diag_(std::move(d)) {}

  ErrorKind kind() const { return kind_; }
  const Diagnostic& diagnostic() const { return diag_; }

  // runtime errors carry the tick and variable at which evaluation got stuck
  int tick = -1;
  std::string var;

 private:
  ErrorKind kind_;
  Diagnostic diag_;
};

}  // namespace luset
