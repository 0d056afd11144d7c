#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tempus/errors.hpp"
#include "tempus/grid_function.hpp"
#include "tempus/time_scale.hpp"

namespace tempus {

/// Arithmetic over the single symbol t: numeric literals, + - * /, ^ with an
/// integer exponent, parentheses, unary minus. Deliberately nothing else
/// (no functions, no other names), so configs stay data rather than code.
class Expr {
public:
    static Expr parse(const std::string& src) {
        Parser p{src, 0};
        NodePtr root = p.parse_sum();
        p.skip_ws();
        if (p.pos != src.size()) {
            throw Error(ErrorKind::ConfigError,
                        "unexpected character '" + std::string(1, src[p.pos]) +
                            "' at position " + std::to_string(p.pos) + " in expression \"" + src +
                            "\"");
        }
        Expr e;
        e.root_ = std::move(root);
        e.source_ = src;
        return e;
    }

    double evaluate(double t) const { return eval(*root_, t); }

    GridFunction evaluate_on(const TimeScalePtr& ts) const {
        std::vector<double> v(ts->size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = evaluate(ts->point(i));
        return GridFunction(ts, std::move(v));
    }

    const std::string& source() const noexcept { return source_; }

private:
    enum class Op { Literal, Variable, Add, Sub, Mul, Div, Neg, Pow };

    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    struct Node {
        Op op;
        double value = 0.0; // Literal
        long exponent = 0;  // Pow
        NodePtr lhs;
        NodePtr rhs;
    };

    static double eval(const Node& n, double t) {
        switch (n.op) {
            case Op::Literal: return n.value;
            case Op::Variable: return t;
            case Op::Add: return eval(*n.lhs, t) + eval(*n.rhs, t);
            case Op::Sub: return eval(*n.lhs, t) - eval(*n.rhs, t);
            case Op::Mul: return eval(*n.lhs, t) * eval(*n.rhs, t);
            case Op::Div: return eval(*n.lhs, t) / eval(*n.rhs, t);
            case Op::Neg: return -eval(*n.lhs, t);
            case Op::Pow: return std::pow(eval(*n.lhs, t), static_cast<double>(n.exponent));
        }
        return 0.0;
    }

    struct Parser {
        const std::string& src;
        std::size_t pos;

        void skip_ws() {
            while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
        }

        bool eat(char c) {
            skip_ws();
            if (pos < src.size() && src[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }

        [[noreturn]] void fail(const std::string& what) const {
            throw Error(ErrorKind::ConfigError, what + " at position " + std::to_string(pos) +
                                                    " in expression \"" + src + "\"");
        }

        NodePtr parse_sum() {
            NodePtr lhs = parse_product();
            for (;;) {
                if (eat('+')) {
                    lhs = binary(Op::Add, std::move(lhs), parse_product());
                } else if (eat('-')) {
                    lhs = binary(Op::Sub, std::move(lhs), parse_product());
                } else {
                    return lhs;
                }
            }
        }

        NodePtr parse_product() {
            NodePtr lhs = parse_unary();
            for (;;) {
                if (eat('*')) {
                    lhs = binary(Op::Mul, std::move(lhs), parse_unary());
                } else if (eat('/')) {
                    lhs = binary(Op::Div, std::move(lhs), parse_unary());
                } else {
                    return lhs;
                }
            }
        }

        NodePtr parse_unary() {
            if (eat('-')) {
                auto n = std::make_shared<Node>();
                n->op = Op::Neg;
                n->lhs = parse_unary();
                return n;
            }
            if (eat('+')) return parse_unary();
            return parse_power();
        }

        NodePtr parse_power() {
            NodePtr base = parse_atom();
            if (!eat('^')) return base;
            skip_ws();
            long expo = 0;
            bool neg = false;
            if (pos < src.size() && (src[pos] == '-' || src[pos] == '+')) {
                neg = src[pos] == '-';
                ++pos;
            }
            if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos]))) {
                fail("'^' needs an integer exponent");
            }
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
                expo = expo * 10 + (src[pos] - '0');
                if (expo > 1000000) fail("exponent out of range");
                ++pos;
            }
            auto n = std::make_shared<Node>();
            n->op = Op::Pow;
            n->exponent = neg ? -expo : expo;
            n->lhs = std::move(base);
            return n;
        }

        NodePtr parse_atom() {
            skip_ws();
            if (pos >= src.size()) fail("unexpected end of expression");
            const char c = src[pos];
            if (c == '(') {
                ++pos;
                NodePtr inner = parse_sum();
                if (!eat(')')) fail("missing ')'");
                return inner;
            }
            if (c == 't' || c == 'T') {
                ++pos;
                auto n = std::make_shared<Node>();
                n->op = Op::Variable;
                return n;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                double value = 0.0;
                const char* begin = src.data() + pos;
                const char* end = src.data() + src.size();
                auto [next, ec] = std::from_chars(begin, end, value);
                if (ec != std::errc{}) fail("bad numeric literal");
                pos += static_cast<std::size_t>(next - begin);
                auto n = std::make_shared<Node>();
                n->op = Op::Literal;
                n->value = value;
                return n;
            }
            fail("expected a number, 't', or '('");
        }

        static NodePtr binary(Op op, NodePtr lhs, NodePtr rhs) {
            auto n = std::make_shared<Node>();
            n->op = op;
            n->lhs = std::move(lhs);
            n->rhs = std::move(rhs);
            return n;
        }
    };

    NodePtr root_;
    std::string source_;
};

} // namespace tempus
