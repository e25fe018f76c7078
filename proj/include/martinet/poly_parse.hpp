#ifndef MARTINET_POLY_PARSE_HPP
#define MARTINET_POLY_PARSE_HPP

#include "martinet/poly.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace martinet {

/// Syntax or name error with the byte offset where parsing stopped.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, size_t offset)
        : std::runtime_error(msg + " (at byte " + std::to_string(offset) + ")"),
          offset_(offset) {}
    size_t offset() const { return offset_; }

private:
    size_t offset_;
};

/// Parses an expression against the grammar
///   EXPR   := TERM (('+'|'-') TERM)*
///   TERM   := FACTOR ('*' FACTOR)*
///   FACTOR := RATIONAL | VAR ('^' NAT)? | '(' EXPR ')'
/// with a leading unary minus allowed. Exponentiation of parenthesized
/// groups is unsupported and rejected.
Poly parse_poly(const std::string& text, const std::vector<std::string>& vars);

/// Canonical form: graded-lex term order (highest first), explicit '*' and '^'.
/// parse_poly(print_poly(p)) == p.
std::string print_poly(const Poly& p, const std::vector<std::string>& vars);

/// Default variable names: (x1,x2,x3) for arity 3, (x,y) for arity 2, (t) for 1.
std::vector<std::string> default_vars(int arity);

} // namespace martinet

#endif
