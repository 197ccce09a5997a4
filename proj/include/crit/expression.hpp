#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace crit {

// Arithmetic expressions in one variable (written `t` for time schedules, `n` for
// generation schedules; both names bind to the same slot at evaluation).
//
// Grammar:
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := unary ("^" unary)?
//   unary  := "-" unary | atom
//   atom   := NUMBER | "t" | "n" | IDENT "(" expr ("," expr)? ")" | "(" expr ")"
//   IDENT  in {exp, log, sqrt, sin, cos, min, max}
class Expression {
  public:
    enum class Op {
        Constant,
        Variable,
        Neg,
        Add,
        Sub,
        Mul,
        Div,
        Pow,
        Exp,
        Log,
        Sqrt,
        Sin,
        Cos,
        Min,
        Max,
    };

    struct Node {
        Op op;
        double value = 0.0; // Constant only
        int a = -1;         // child indices into the node pool
        int b = -1;
    };

    /// Throws Error(SyntaxError) with a byte offset, or Error(UnknownIdentifier).
    static Expression parse(std::string_view text);

    static Expression constant(double value);

    /// Total on the declared domain; division by zero, log of nonpositive values,
    /// sqrt of negatives and non-finite results raise Error(EvaluationError).
    double eval(double x) const;

    /// Canonical fully parenthesized form; parse(str()) reproduces the same tree.
    std::string str() const;

    bool structurally_equal(const Expression& other) const;

    const std::vector<Node>& nodes() const { return nodes_; }

  private:
    std::vector<Node> nodes_;
    int root_ = -1;

    double eval_node(int idx, double x) const;
    void print_node(int idx, std::string& out) const;
};

} // namespace crit
