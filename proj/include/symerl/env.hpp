#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "symerl/ast.hpp"
#include "symerl/term.hpp"

namespace symerl {

// Raised on engine invariant violations (e.g. a program variable with no
// binding). Never raised for anything a user program does at runtime.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Program-variable bindings plus the runtime error flag. Persistent: `bind`
// and `with_error_flag` return new environments and share structure.
class Env {
 public:
  Env() = default;

  Env bind(std::string name, Term value) const {
    Env out = *this;
    out.head_ = std::make_shared<const Node>(Node{std::move(name), std::move(value), head_});
    return out;
  }

  const Term* lookup(std::string_view name) const {
    for (const Node* n = head_.get(); n; n = n->next.get())
      if (n->name == name) return &n->value;
    return nullptr;
  }

  const Term& at(std::string_view name) const {
    if (const Term* t = lookup(name)) return *t;
    throw InternalError("unbound program variable " + std::string(name));
  }

  bool error_flag() const { return error_; }
  Env with_error_flag(bool flag) const {
    Env out = *this;
    out.error_ = flag;
    return out;
  }

  // Visible bindings, innermost first, shadowed names omitted.
  std::vector<std::pair<std::string, Term>> bindings() const {
    std::vector<std::pair<std::string, Term>> out;
    for (const Node* n = head_.get(); n; n = n->next.get()) {
      bool seen = false;
      for (auto& [k, v] : out) seen = seen || k == n->name;
      if (!seen) out.emplace_back(n->name, n->value);
    }
    return out;
  }

 private:
  struct Node {
    std::string name;
    Term value;
    std::shared_ptr<const Node> next;
  };
  std::shared_ptr<const Node> head_;
  bool error_ = false;
};

// cf(Env, Exp): an expression still to evaluate under an environment.
struct Config {
  Env env;
  Expr expr;
};

}  // namespace symerl
