#include "bvp/expression.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <vector>

#include "bvp/errors.hpp"

namespace bvp {

namespace {

using Fn = std::function<double(double)>;

struct Parser {
    const std::string& text;
    size_t pos = 0;
    bool uses_t = false;

    explicit Parser(const std::string& s) : text(s) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("expression error at position " + std::to_string(pos) + ": " +
                         what + " in \"" + text + "\"");
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
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

    Fn parse() {
        Fn e = expr();
        skip_ws();
        if (pos != text.size()) fail("unexpected trailing input");
        return e;
    }

    Fn expr() {  // addition level
        Fn lhs = term();
        for (;;) {
            if (eat('+')) {
                Fn rhs = term();
                lhs = [lhs, rhs](double t) { return lhs(t) + rhs(t); };
            } else if (eat('-')) {
                Fn rhs = term();
                lhs = [lhs, rhs](double t) { return lhs(t) - rhs(t); };
            } else {
                return lhs;
            }
        }
    }

    Fn term() {  // multiplication level
        Fn lhs = unary();
        for (;;) {
            if (eat('*')) {
                Fn rhs = unary();
                lhs = [lhs, rhs](double t) { return lhs(t) * rhs(t); };
            } else if (eat('/')) {
                Fn rhs = unary();
                lhs = [lhs, rhs](double t) { return lhs(t) / rhs(t); };
            } else {
                return lhs;
            }
        }
    }

    Fn unary() {
        if (eat('-')) {
            Fn e = unary();
            return [e](double t) { return -e(t); };
        }
        if (eat('+')) return unary();
        return power();
    }

    Fn power() {  // right-associative
        Fn base = atom();
        if (eat('^')) {
            Fn ex = unary();
            return [base, ex](double t) { return std::pow(base(t), ex(t)); };
        }
        return base;
    }

    Fn atom() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of input");
        char c = text[pos];
        if (c == '(') {
            ++pos;
            Fn e = expr();
            if (!eat(')')) fail("missing ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    Fn number() {
        size_t start = pos;
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
                text[pos] == 'e' || text[pos] == 'E' ||
                ((text[pos] == '+' || text[pos] == '-') && pos > start &&
                 (text[pos - 1] == 'e' || text[pos - 1] == 'E'))))
            ++pos;
        try {
            size_t used = 0;
            double v = std::stod(text.substr(start, pos - start), &used);
            if (used != pos - start) fail("malformed number");
            return [v](double) { return v; };
        } catch (const std::exception&) {
            pos = start;
            fail("malformed number");
        }
    }

    Fn identifier() {
        size_t start = pos;
        while (pos < text.size() &&
               std::isalnum(static_cast<unsigned char>(text[pos])))
            ++pos;
        std::string name = text.substr(start, pos - start);
        if (name == "t") {
            uses_t = true;
            return [](double t) { return t; };
        }
        if (name == "pi") return [](double) { return M_PI; };
        if (name == "e") return [](double) { return M_E; };

        static const struct {
            const char* name;
            double (*fn)(double);
        } kFunctions[] = {
            {"sin", std::sin}, {"cos", std::cos},   {"tan", std::tan},
            {"exp", std::exp}, {"log", std::log},   {"abs", std::fabs},
            {"sqrt", std::sqrt},
        };
        for (const auto& f : kFunctions) {
            if (name == f.name) {
                if (!eat('(')) fail("expected '(' after " + name);
                Fn arg = expr();
                if (!eat(')')) fail("missing ')' after argument of " + name);
                auto fn = f.fn;
                return [fn, arg](double t) { return fn(arg(t)); };
            }
        }
        pos = start;
        fail("unknown identifier '" + name + "'");
    }
};

}  // namespace

std::function<double(double)> compile_expression(const std::string& text) {
    Parser p(text);
    return p.parse();
}

double evaluate_constant(const std::string& text) {
    Parser p(text);
    Fn f = p.parse();
    if (p.uses_t) throw ParseError("constant expression must not use t: \"" + text + "\"");
    return f(0.0);
}

}  // namespace bvp
