#pragma once

#include <stdexcept>
#include <string>

#include "ljet/expr.hpp"
#include "ljet/symbol.hpp"

namespace ljet {

class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string &msg, size_t position)
        : std::runtime_error(msg + " (at position " + std::to_string(position) + ")"),
          pos_(position)
    {
    }
    size_t position() const { return pos_; }

  private:
    size_t pos_;
};

/// Parses the expression grammar: identifiers, rational/decimal literals,
/// + - * / ^, exp/ln/sin/cos/tan, uninterpreted g'(t), parentheses.
/// Identifiers must be declared in ctx. Returns the canonical expression.
Expr parse(const std::string &text, const JetContext &ctx);

} // namespace ljet
