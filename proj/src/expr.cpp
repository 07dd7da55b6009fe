#include "subgeo/expr.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <optional>

namespace subgeo {

namespace {

Expr make(ExprKind kind, std::vector<Expr> children = {}) {
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->children = std::move(children);
    return n;
}

Expr make_number(double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Number;
    n->number = v;
    return n;
}

struct FunctionName {
    std::string_view name;
    Function f;
};
constexpr FunctionName kFunctions[] = {
    {"exp", Function::Exp}, {"log", Function::Log},   {"sin", Function::Sin},
    {"cos", Function::Cos}, {"sqrt", Function::Sqrt}, {"tanh", Function::Tanh},
};

class Parser {
public:
    Parser(std::string_view text, ChartVariables vars) : text_(text), vars_(vars) {}

    Expr parse_all() {
        skip_ws();
        if (at_end()) throw SyntaxError("empty expression", pos_);
        Expr e = expr();
        skip_ws();
        if (!at_end()) throw SyntaxError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        return e;
    }

private:
    std::string_view text_;
    ChartVariables vars_;
    std::size_t pos_ = 0;

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }
    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip_ws();
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr expr() {
        Expr lhs = term();
        for (;;) {
            if (accept('+')) lhs = make(ExprKind::Add, {lhs, term()});
            else if (accept('-')) lhs = make(ExprKind::Subtract, {lhs, term()});
            else return lhs;
        }
    }

    Expr term() {
        Expr lhs = unary();
        for (;;) {
            if (accept('*')) lhs = make(ExprKind::Multiply, {lhs, unary()});
            else if (accept('/')) lhs = make(ExprKind::Divide, {lhs, unary()});
            else return lhs;
        }
    }

    Expr unary() {
        if (accept('-')) return make(ExprKind::Negate, {unary()});
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (!accept('^')) return base;
        skip_ws();
        bool negative = false;
        if (peek() == '-') {
            negative = true;
            ++pos_;
        }
        const std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (start == pos_) throw SyntaxError("expected integer exponent", pos_);
        if (peek() == '.' || peek() == 'e' || peek() == 'E') throw SyntaxError("exponent must be an integer", pos_);
        int value = 0;
        std::from_chars(text_.data() + start, text_.data() + pos_, value);
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprKind::Power;
        n->index = negative ? -value : value;
        n->children = {base};
        return n;
    }

    Expr primary() {
        skip_ws();
        if (at_end()) throw SyntaxError("unexpected end of input", pos_);
        const char c = peek();
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            if (!accept(')')) throw SyntaxError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
    }

    Expr number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            const std::size_t s = pos_;
            while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
            return pos_ > s;
        };
        bool any = digits();
        if (peek() == '.') {
            ++pos_;
            any = digits() || any;
        }
        if (!any) throw SyntaxError("malformed number", start);
        if (peek() == 'e' || peek() == 'E') {
            ++pos_;
            if (peek() == '+' || peek() == '-') ++pos_;
            if (!digits()) throw SyntaxError("malformed exponent", pos_);
        }
        double v = 0.0;
        const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (res.ec != std::errc()) throw SyntaxError("malformed number", start);
        return make_number(v);
    }

    Expr identifier() {
        const std::size_t start = pos_;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
        const std::string_view name = text_.substr(start, pos_ - start);

        for (const auto& [fname, f] : kFunctions) {
            if (name != fname) continue;
            if (!accept('(')) throw SyntaxError("expected '(' after " + std::string(name), pos_);
            Expr arg = expr();
            if (!accept(')')) throw SyntaxError("expected ')'", pos_);
            auto n = std::make_shared<ExprNode>();
            n->kind = ExprKind::Call;
            n->function = f;
            n->children = {arg};
            return n;
        }

        if (name.size() >= 2 && (name[0] == 'x' || name[0] == 'u')) {
            int idx = 0;
            const auto digits = name.substr(1);
            const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), idx);
            if (res.ec == std::errc() && res.ptr == digits.data() + digits.size()) {
                const int limit = name[0] == 'x' ? vars_.dim : vars_.velocity_dim;
                if (idx < 1 || idx > limit)
                    throw VariableOutOfRange("variable " + std::string(name) + " out of range", start);
                auto n = std::make_shared<ExprNode>();
                n->kind = ExprKind::Variable;
                n->index = (name[0] == 'x' ? 0 : vars_.dim) + idx - 1;
                return n;
            }
        }
        throw UnknownIdentifier("unknown identifier '" + std::string(name) + "'", start);
    }
};

std::string_view function_name(Function f) {
    for (const auto& [name, fn] : kFunctions)
        if (fn == f) return name;
    return "?";
}

void print_into(const Expr& e, ChartVariables vars, std::string& out) {
    switch (e->kind) {
    case ExprKind::Number: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", e->number);
        out += buf;
        return;
    }
    case ExprKind::Variable:
        if (e->index < vars.dim) out += "x" + std::to_string(e->index + 1);
        else out += "u" + std::to_string(e->index - vars.dim + 1);
        return;
    case ExprKind::Negate:
        out += "(-";
        print_into(e->children[0], vars, out);
        out += ")";
        return;
    case ExprKind::Power:
        out += "(";
        print_into(e->children[0], vars, out);
        out += "^" + std::to_string(e->index) + ")";
        return;
    case ExprKind::Call:
        out += function_name(e->function);
        out += "(";
        print_into(e->children[0], vars, out);
        out += ")";
        return;
    default: break;
    }
    const char* op = e->kind == ExprKind::Add ? "+" : e->kind == ExprKind::Subtract ? "-" : e->kind == ExprKind::Multiply ? "*" : "/";
    out += "(";
    print_into(e->children[0], vars, out);
    out += op;
    print_into(e->children[1], vars, out);
    out += ")";
}

std::vector<double> point_of(std::span<const JetD> coords) {
    std::vector<double> p;
    p.reserve(coords.size());
    for (const auto& c : coords) p.push_back(c.value());
    return p;
}

JetD eval_node(const Expr& e, std::span<const JetD> coords) {
    switch (e->kind) {
    case ExprKind::Number: return JetD(e->number);
    case ExprKind::Variable:
        if (e->index >= static_cast<int>(coords.size())) throw ContractViolation("point has too few coordinates");
        return coords[static_cast<std::size_t>(e->index)];
    case ExprKind::Negate: return -eval_node(e->children[0], coords);
    case ExprKind::Add: return eval_node(e->children[0], coords) + eval_node(e->children[1], coords);
    case ExprKind::Subtract: return eval_node(e->children[0], coords) - eval_node(e->children[1], coords);
    case ExprKind::Multiply: return eval_node(e->children[0], coords) * eval_node(e->children[1], coords);
    case ExprKind::Divide: return eval_node(e->children[0], coords) / eval_node(e->children[1], coords);
    case ExprKind::Power: return pow(eval_node(e->children[0], coords), e->index);
    case ExprKind::Call: {
        const JetD a = eval_node(e->children[0], coords);
        switch (e->function) {
        case Function::Exp: return exp(a);
        case Function::Log: return log(a);
        case Function::Sin: return sin(a);
        case Function::Cos: return cos(a);
        case Function::Sqrt: return sqrt(a);
        case Function::Tanh: return tanh(a);
        }
    }
    }
    throw ContractViolation("corrupt expression node");
}

}  // namespace

Expr parse(std::string_view text, ChartVariables vars) { return Parser(text, vars).parse_all(); }

std::string print(const Expr& e, ChartVariables vars) {
    std::string out;
    print_into(e, vars, out);
    return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a->kind != b->kind || a->children.size() != b->children.size()) return false;
    switch (a->kind) {
    case ExprKind::Number:
        if (a->number != b->number) return false;
        break;
    case ExprKind::Variable:
    case ExprKind::Power:
        if (a->index != b->index) return false;
        break;
    case ExprKind::Call:
        if (a->function != b->function) return false;
        break;
    default: break;
    }
    for (std::size_t i = 0; i < a->children.size(); ++i)
        if (!structurally_equal(a->children[i], b->children[i])) return false;
    return true;
}

JetD eval(const Expr& e, std::span<const JetD> coords) {
    try {
        return eval_node(e, coords);
    } catch (const EvalDomain& err) {
        throw EvalDomain(err.what(), point_of(coords));
    }
}

JetD eval_jet(const Expr& e, const Point& point, int order) {
    const auto coords = seed_all<double>(std::span<const double>(point.data(), static_cast<std::size_t>(point.size())), order);
    return eval(e, coords);
}

double eval_value(const Expr& e, const Point& point) {
    std::vector<JetD> coords;
    coords.reserve(static_cast<std::size_t>(point.size()));
    for (Eigen::Index i = 0; i < point.size(); ++i) coords.emplace_back(point[i]);
    return eval(e, coords).value();
}

}  // namespace subgeo
