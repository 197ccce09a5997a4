#include "crit/expression.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

#include "crit/errors.hpp"

namespace crit {

namespace {

struct Parser {
    std::string_view text;
    size_t pos = 0;
    std::vector<Expression::Node>* nodes;

    [[noreturn]] void syntax_error(const std::string& what, size_t at) {
        fail(ErrorCode::SyntaxError, what + " at byte " + std::to_string(at));
    }

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' || text[pos] == '\r'))
            ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    int add(Expression::Node n) {
        nodes->push_back(n);
        return static_cast<int>(nodes->size()) - 1;
    }

    int parse_expr() {
        int lhs = parse_term();
        for (;;) {
            if (eat('+'))
                lhs = add({Expression::Op::Add, 0.0, lhs, parse_term()});
            else if (eat('-'))
                lhs = add({Expression::Op::Sub, 0.0, lhs, parse_term()});
            else
                return lhs;
        }
    }

    int parse_term() {
        int lhs = parse_factor();
        for (;;) {
            if (eat('*'))
                lhs = add({Expression::Op::Mul, 0.0, lhs, parse_factor()});
            else if (eat('/'))
                lhs = add({Expression::Op::Div, 0.0, lhs, parse_factor()});
            else
                return lhs;
        }
    }

    int parse_factor() {
        int base = parse_unary();
        if (eat('^')) return add({Expression::Op::Pow, 0.0, base, parse_unary()});
        return base;
    }

    int parse_unary() {
        if (eat('-')) return add({Expression::Op::Neg, 0.0, parse_unary()});
        return parse_atom();
    }

    int parse_atom() {
        skip_ws();
        if (pos >= text.size()) syntax_error("unexpected end of input", pos);
        char c = text[pos];
        if ((c >= '0' && c <= '9') || c == '.') return parse_number();
        if (c == '(') {
            ++pos;
            int inner = parse_expr();
            if (!eat(')')) syntax_error("expected ')'", pos);
            return inner;
        }
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') return parse_ident();
        syntax_error(std::string("unexpected character '") + c + "'", pos);
    }

    int parse_number() {
        size_t start = pos;
        while (pos < text.size() && ((text[pos] >= '0' && text[pos] <= '9') || text[pos] == '.')) ++pos;
        if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
            size_t mark = pos;
            ++pos;
            if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
            if (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
                while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
            } else {
                pos = mark; // 'e' was not an exponent
            }
        }
        double value = 0.0;
        auto res = std::from_chars(text.data() + start, text.data() + pos, value);
        if (res.ec != std::errc() || res.ptr != text.data() + pos)
            syntax_error("malformed number", start);
        return add({Expression::Op::Constant, value});
    }

    int parse_ident() {
        size_t start = pos;
        while (pos < text.size() &&
               ((text[pos] >= 'a' && text[pos] <= 'z') || (text[pos] >= 'A' && text[pos] <= 'Z') ||
                (text[pos] >= '0' && text[pos] <= '9') || text[pos] == '_'))
            ++pos;
        std::string_view name = text.substr(start, pos - start);
        if (name == "t" || name == "n") return add({Expression::Op::Variable});

        Expression::Op op;
        int arity = 1;
        if (name == "exp") op = Expression::Op::Exp;
        else if (name == "log") op = Expression::Op::Log;
        else if (name == "sqrt") op = Expression::Op::Sqrt;
        else if (name == "sin") op = Expression::Op::Sin;
        else if (name == "cos") op = Expression::Op::Cos;
        else if (name == "min") { op = Expression::Op::Min; arity = 2; }
        else if (name == "max") { op = Expression::Op::Max; arity = 2; }
        else fail(ErrorCode::UnknownIdentifier, "'" + std::string(name) + "' at byte " + std::to_string(start));

        if (!eat('(')) syntax_error("expected '(' after function name", pos);
        int a = parse_expr();
        int b = -1;
        if (arity == 2) {
            if (!eat(',')) syntax_error("expected ',' (two-argument function)", pos);
            b = parse_expr();
        } else if (peek() == ',') {
            syntax_error("one-argument function given two arguments", pos);
        }
        if (!eat(')')) syntax_error("expected ')'", pos);
        return add({op, 0.0, a, b});
    }
};

} // namespace

Expression Expression::parse(std::string_view text) {
    Expression e;
    if (text.empty()) fail(ErrorCode::SyntaxError, "empty expression");
    Parser p{text, 0, &e.nodes_};
    e.root_ = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) p.syntax_error("trailing input", p.pos);
    return e;
}

Expression Expression::constant(double value) {
    Expression e;
    e.nodes_.push_back({Op::Constant, value});
    e.root_ = 0;
    return e;
}

double Expression::eval(double x) const { return eval_node(root_, x); }

double Expression::eval_node(int idx, double x) const {
    const Node& n = nodes_[idx];
    switch (n.op) {
        case Op::Constant: return n.value;
        case Op::Variable: return x;
        case Op::Neg: return -eval_node(n.a, x);
        case Op::Add: return eval_node(n.a, x) + eval_node(n.b, x);
        case Op::Sub: return eval_node(n.a, x) - eval_node(n.b, x);
        case Op::Mul: return eval_node(n.a, x) * eval_node(n.b, x);
        case Op::Div: {
            double num = eval_node(n.a, x);
            double den = eval_node(n.b, x);
            if (den == 0.0)
                fail(ErrorCode::EvaluationError, "division by zero at variable=" + std::to_string(x));
            return num / den;
        }
        case Op::Pow: {
            double base = eval_node(n.a, x);
            double expo = eval_node(n.b, x);
            double r = std::pow(base, expo);
            if (!std::isfinite(r))
                fail(ErrorCode::EvaluationError, "pow(" + std::to_string(base) + ", " + std::to_string(expo) +
                                                     ") is not finite at variable=" + std::to_string(x));
            return r;
        }
        case Op::Exp: {
            double r = std::exp(eval_node(n.a, x));
            if (!std::isfinite(r)) fail(ErrorCode::EvaluationError, "exp overflow at variable=" + std::to_string(x));
            return r;
        }
        case Op::Log: {
            double a = eval_node(n.a, x);
            if (a <= 0.0)
                fail(ErrorCode::EvaluationError, "log of nonpositive value " + std::to_string(a) +
                                                     " at variable=" + std::to_string(x));
            return std::log(a);
        }
        case Op::Sqrt: {
            double a = eval_node(n.a, x);
            if (a < 0.0)
                fail(ErrorCode::EvaluationError, "sqrt of negative value " + std::to_string(a) +
                                                     " at variable=" + std::to_string(x));
            return std::sqrt(a);
        }
        case Op::Sin: return std::sin(eval_node(n.a, x));
        case Op::Cos: return std::cos(eval_node(n.a, x));
        case Op::Min: return std::min(eval_node(n.a, x), eval_node(n.b, x));
        case Op::Max: return std::max(eval_node(n.a, x), eval_node(n.b, x));
    }
    fail(ErrorCode::EvaluationError, "corrupt expression node");
}

namespace {

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace

void Expression::print_node(int idx, std::string& out) const {
    const Node& n = nodes_[idx];
    auto binary = [&](const char* sym) {
        out += '(';
        print_node(n.a, out);
        out += ' ';
        out += sym;
        out += ' ';
        print_node(n.b, out);
        out += ')';
    };
    auto fn = [&](const char* name) {
        out += name;
        out += '(';
        print_node(n.a, out);
        if (n.b >= 0) {
            out += ", ";
            print_node(n.b, out);
        }
        out += ')';
    };
    switch (n.op) {
        case Op::Constant: out += format_number(n.value); return;
        case Op::Variable: out += 't'; return;
        case Op::Neg:
            out += "(-";
            print_node(n.a, out);
            out += ')';
            return;
        case Op::Add: binary("+"); return;
        case Op::Sub: binary("-"); return;
        case Op::Mul: binary("*"); return;
        case Op::Div: binary("/"); return;
        case Op::Pow: binary("^"); return;
        case Op::Exp: fn("exp"); return;
        case Op::Log: fn("log"); return;
        case Op::Sqrt: fn("sqrt"); return;
        case Op::Sin: fn("sin"); return;
        case Op::Cos: fn("cos"); return;
        case Op::Min: fn("min"); return;
        case Op::Max: fn("max"); return;
    }
}

std::string Expression::str() const {
    std::string out;
    print_node(root_, out);
    return out;
}

namespace {

bool nodes_equal(const std::vector<Expression::Node>& an, int a, const std::vector<Expression::Node>& bn, int b) {
    if ((a < 0) != (b < 0)) return false;
    if (a < 0) return true;
    const auto& x = an[a];
    const auto& y = bn[b];
    if (x.op != y.op) return false;
    if (x.op == Expression::Op::Constant && x.value != y.value) return false;
    return nodes_equal(an, x.a, bn, y.a) && nodes_equal(an, x.b, bn, y.b);
}

} // namespace

bool Expression::structurally_equal(const Expression& other) const {
    return nodes_equal(nodes_, root_, other.nodes_, other.root_);
}

} // namespace crit
