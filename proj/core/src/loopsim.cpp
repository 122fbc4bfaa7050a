#include "kseries/loopsim.hpp"

#include <cctype>
#include <cmath>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "kseries/errors.hpp"
#include "kseries/rng.hpp"

namespace kseries {

namespace {

using namespace loop;

// ---------------------------------------------------------------- lexer

enum class TokKind {
    Ident,
    Number,
    Assign,  // :=
    Colon,
    Comma,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Plus,
    Minus,
    Star,
    Slash,
    End
};

struct Token {
    TokKind kind;
    std::string text;
    double number = 0.0;
    int line = 1, col = 1;
};

std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto push = [&](TokKind k, std::string t, double num = 0.0) {
        out.push_back({k, std::move(t), num, line, col});
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++col;
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') ++i;
            continue;
        }
        int start_col = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) ||
                    src[j] == '_'))
                ++j;
            Token t{TokKind::Ident, src.substr(i, j - i), 0.0, line,
                    start_col};
            out.push_back(t);
            col += int(j - i);
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < src.size() &&
             std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            std::size_t j = i;
            while (j < src.size() &&
                   (std::isdigit(static_cast<unsigned char>(src[j])) ||
                    src[j] == '.' || src[j] == 'e' || src[j] == 'E' ||
                    ((src[j] == '+' || src[j] == '-') && j > i &&
                     (src[j - 1] == 'e' || src[j - 1] == 'E'))))
                ++j;
            std::string text = src.substr(i, j - i);
            try {
                double v = std::stod(text);
                out.push_back({TokKind::Number, text, v, line, start_col});
            } catch (const std::exception&) {
                throw SyntaxError("bad number literal '" + text + "'", line,
                                  start_col);
            }
            col += int(j - i);
            i = j;
            continue;
        }
        if (c == ':' && i + 1 < src.size() && src[i + 1] == '=') {
            push(TokKind::Assign, ":=");
            i += 2;
            col += 2;
            continue;
        }
        TokKind k;
        switch (c) {
            case ':': k = TokKind::Colon; break;
            case ',': k = TokKind::Comma; break;
            case '(': k = TokKind::LParen; break;
            case ')': k = TokKind::RParen; break;
            case '{': k = TokKind::LBrace; break;
            case '}': k = TokKind::RBrace; break;
            case '+': k = TokKind::Plus; break;
            case '-': k = TokKind::Minus; break;
            case '*': k = TokKind::Star; break;
            case '/': k = TokKind::Slash; break;
            default:
                throw SyntaxError(std::string("unexpected character '") + c +
                                      "'",
                                  line, col);
        }
        push(k, std::string(1, c));
        ++i;
        ++col;
    }
    out.push_back({TokKind::End, "<eof>", 0.0, line, col});
    return out;
}

// --------------------------------------------------------------- parser

const std::set<std::string> kFunctions = {"sin", "cos", "min", "max", "abs"};
const std::set<std::string> kDistNames = {"Uniform", "Normal", "Beta"};
const std::set<std::string> kKeywords = {"while", "end", "True"};

class Parser {
  public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    LoopProgram parse() {
        LoopProgram prog;
        std::set<std::string> assigned;

        while (!at_ident("while")) {
            if (peek().kind == TokKind::End)
                throw SyntaxError("expected 'while (True):' loop", peek().line,
                                  peek().col);
            prog.init.push_back(parse_statement(assigned, /*in_body=*/false));
            assigned.insert(prog.init.back().target);
        }
        expect_ident("while");
        expect(TokKind::LParen, "(");
        expect_ident("True");
        expect(TokKind::RParen, ")");
        expect(TokKind::Colon, ":");

        while (!at_ident("end")) {
            if (peek().kind == TokKind::End)
                throw SyntaxError("missing 'end'", peek().line, peek().col);
            prog.body.push_back(parse_statement(assigned, /*in_body=*/true));
            assigned.insert(prog.body.back().target);
        }
        expect_ident("end");
        if (peek().kind != TokKind::End)
            throw SyntaxError("trailing input after 'end'", peek().line,
                              peek().col);
        if (prog.body.empty())
            throw SyntaxError("loop body is empty", peek().line, peek().col);

        std::set<std::string> seen;
        for (const auto& st : prog.body)
            if (!std::holds_alternative<DistCall>(st.rhs) &&
                seen.insert(st.target).second)
                prog.outputs.push_back(st.target);
        if (prog.outputs.empty())
            throw SyntaxError(
                "loop body assigns no output variable (draws only)",
                peek().line, peek().col);
        return prog;
    }

  private:
    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    const Token& advance() { return toks_[pos_++]; }
    bool at_ident(const std::string& name) const {
        return peek().kind == TokKind::Ident && peek().text == name;
    }
    void expect_ident(const std::string& name) {
        if (!at_ident(name))
            throw SyntaxError("expected '" + name + "', found '" +
                                  peek().text + "'",
                              peek().line, peek().col);
        advance();
    }
    void expect(TokKind k, const std::string& what) {
        if (peek().kind != k)
            throw SyntaxError("expected '" + what + "', found '" +
                                  peek().text + "'",
                              peek().line, peek().col);
        advance();
    }

    Statement parse_statement(const std::set<std::string>& assigned,
                              bool in_body) {
        const Token& name = peek();
        if (name.kind != TokKind::Ident)
            throw SyntaxError("expected a variable name, found '" +
                                  name.text + "'",
                              name.line, name.col);
        if (name.text == "while")
            throw NestedLoop("nested loops are not allowed", name.line,
                             name.col);
        if (kKeywords.count(name.text) || kFunctions.count(name.text) ||
            kDistNames.count(name.text))
            throw SyntaxError("'" + name.text + "' cannot be assigned",
                              name.line, name.col);
        advance();
        expect(TokKind::Assign, ":=");

        Statement st;
        st.target = name.text;
        if (peek().kind == TokKind::Ident && kDistNames.count(peek().text)) {
            st.rhs = parse_dist(assigned);
            return st;
        }
        ExprPtr first = parse_expr(assigned);
        if (peek().kind == TokKind::LBrace) {
            if (!in_body)
                throw SyntaxError(
                    "probabilistic branching is only allowed in the loop body",
                    peek().line, peek().col);
            advance();
            const Token& p = peek();
            if (p.kind != TokKind::Number)
                throw SyntaxError("expected a probability literal", p.line,
                                  p.col);
            double prob = p.number;
            if (prob < 0.0 || prob > 1.0)
                throw SyntaxError("branch probability must lie in [0, 1]",
                                  p.line, p.col);
            advance();
            expect(TokKind::RBrace, "}");
            ExprPtr second = parse_expr(assigned);
            st.rhs = Branch{first, prob, second};
            return st;
        }
        st.rhs = first;
        return st;
    }

    DistCall parse_dist(const std::set<std::string>& assigned) {
        const Token& name = advance();
        DistKind kind = name.text == "Uniform"  ? DistKind::Uniform
                        : name.text == "Normal" ? DistKind::Normal
                                                : DistKind::Beta;
        expect(TokKind::LParen, "(");
        ExprPtr a0 = parse_expr(assigned);
        expect(TokKind::Comma, ",");
        ExprPtr a1 = parse_expr(assigned);
        expect(TokKind::RParen, ")");
        return DistCall{kind, a0, a1};
    }

    ExprPtr parse_expr(const std::set<std::string>& assigned) {
        ExprPtr lhs = parse_term(assigned);
        while (peek().kind == TokKind::Plus ||
               peek().kind == TokKind::Minus) {
            char op = advance().text[0];
            ExprPtr rhs = parse_term(assigned);
            lhs = std::make_shared<Expr>(Expr{Binary{op, lhs, rhs}});
        }
        return lhs;
    }

    ExprPtr parse_term(const std::set<std::string>& assigned) {
        ExprPtr lhs = parse_factor(assigned);
        while (peek().kind == TokKind::Star ||
               peek().kind == TokKind::Slash) {
            char op = advance().text[0];
            ExprPtr rhs = parse_factor(assigned);
            lhs = std::make_shared<Expr>(Expr{Binary{op, lhs, rhs}});
        }
        return lhs;
    }

    ExprPtr parse_factor(const std::set<std::string>& assigned) {
        const Token& t = peek();
        if (t.kind == TokKind::Minus) {
            advance();
            return std::make_shared<Expr>(
                Expr{Unary{'-', parse_factor(assigned)}});
        }
        if (t.kind == TokKind::Number) {
            advance();
            return std::make_shared<Expr>(Expr{Num{t.number}});
        }
        if (t.kind == TokKind::LParen) {
            advance();
            ExprPtr e = parse_expr(assigned);
            // Attribute an unbalanced paren to the line it was opened on,
            // not to wherever the token stream happened to end.
            if (peek().kind != TokKind::RParen)
                throw SyntaxError("missing ')' to close '('", t.line, t.col);
            advance();
            return e;
        }
        if (t.kind == TokKind::Ident) {
            if (t.text == "while")
                throw NestedLoop("nested loops are not allowed", t.line,
                                 t.col);
            if (kFunctions.count(t.text)) {
                advance();
                expect(TokKind::LParen, "(");
                std::vector<ExprPtr> args;
                args.push_back(parse_expr(assigned));
                while (peek().kind == TokKind::Comma) {
                    advance();
                    args.push_back(parse_expr(assigned));
                }
                expect(TokKind::RParen, ")");
                std::size_t want =
                    (t.text == "min" || t.text == "max") ? 2 : 1;
                if (args.size() != want)
                    throw SyntaxError("'" + t.text + "' takes " +
                                          std::to_string(want) +
                                          " argument(s)",
                                      t.line, t.col);
                return std::make_shared<Expr>(
                    Expr{Call{t.text, std::move(args)}});
            }
            if (kDistNames.count(t.text))
                throw SyntaxError(
                    "distribution draws may only appear on the right-hand "
                    "side of an assignment",
                    t.line, t.col);
            if (peek(1).kind == TokKind::LParen)
                throw UnknownFunction("unknown function '" + t.text + "'",
                                      t.line, t.col);
            if (!assigned.count(t.text))
                throw UseBeforeAssign(
                    "variable '" + t.text + "' used before assignment",
                    t.line, t.col);
            advance();
            return std::make_shared<Expr>(Expr{Var{t.text}});
        }
        throw SyntaxError("unexpected token '" + t.text + "'", t.line,
                          t.col);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

// --------------------------------------------------------- pretty print

void print_expr(std::ostringstream& os, const Expr& e);

void print_child(std::ostringstream& os, const Expr& e) {
    bool atom = std::holds_alternative<Num>(e.node) ||
                std::holds_alternative<Var>(e.node) ||
                std::holds_alternative<Call>(e.node);
    if (!atom) os << '(';
    print_expr(os, e);
    if (!atom) os << ')';
}

void print_expr(std::ostringstream& os, const Expr& e) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Num>) {
                os.precision(17);
                os << n.value;
            } else if constexpr (std::is_same_v<T, Var>) {
                os << n.name;
            } else if constexpr (std::is_same_v<T, Unary>) {
                os << n.op;
                print_child(os, *n.operand);
            } else if constexpr (std::is_same_v<T, Binary>) {
                print_child(os, *n.lhs);
                os << ' ' << n.op << ' ';
                print_child(os, *n.rhs);
            } else {
                os << n.fn << '(';
                for (std::size_t i = 0; i < n.args.size(); ++i) {
                    if (i) os << ", ";
                    print_expr(os, *n.args[i]);
                }
                os << ')';
            }
        },
        e.node);
}

void print_statement(std::ostringstream& os, const Statement& st,
                     const char* indent) {
    os << indent << st.target << " := ";
    std::visit(
        [&](const auto& rhs) {
            using T = std::decay_t<decltype(rhs)>;
            if constexpr (std::is_same_v<T, ExprPtr>) {
                print_expr(os, *rhs);
            } else if constexpr (std::is_same_v<T, DistCall>) {
                os << (rhs.kind == DistKind::Uniform  ? "Uniform"
                       : rhs.kind == DistKind::Normal ? "Normal"
                                                      : "Beta")
                   << '(';
                print_expr(os, *rhs.arg0);
                os << ", ";
                print_expr(os, *rhs.arg1);
                os << ')';
            } else {
                print_expr(os, *rhs.first);
                os.precision(17);
                os << " {" << rhs.probability << "} ";
                print_expr(os, *rhs.second);
            }
        },
        st.rhs);
    os << '\n';
}

// ------------------------------------------------------------ execution

class Interpreter {
  public:
    explicit Interpreter(const LoopProgram& prog) : prog_(prog) {
        auto intern = [&](const std::string& name) {
            auto [it, fresh] = slot_.emplace(name, slot_.size());
            (void)fresh;
            return it->second;
        };
        auto compile_stmt = [&](const Statement& st) {
            CompiledStmt cs;
            cs.rhs = &st.rhs;
            cs.target = intern(st.target);
            return cs;
        };
        for (const auto& st : prog.init) init_.push_back(compile_stmt(st));
        for (const auto& st : prog.body) body_.push_back(compile_stmt(st));
        for (const auto& name : prog.outputs)
            output_slots_.push_back(slot_.at(name));
        // interning happens in assignment order, so every Var resolves
        values_.resize(slot_.size());
    }

    std::size_t num_outputs() const { return output_slots_.size(); }

    void run(std::int64_t iterations, RngStream& rng,
             std::vector<double>& out_row) {
        for (const auto& st : init_) exec(st, rng);
        for (std::int64_t t = 0; t < iterations; ++t)
            for (const auto& st : body_) exec(st, rng);
        out_row.resize(output_slots_.size());
        for (std::size_t j = 0; j < output_slots_.size(); ++j)
            out_row[j] = values_[output_slots_[j]];
    }

  private:
    struct CompiledStmt {
        const std::variant<ExprPtr, DistCall, Branch>* rhs;
        std::size_t target;
    };

    double eval(const Expr& e, RngStream& rng) {
        return std::visit(
            [&](const auto& n) -> double {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Num>) {
                    return n.value;
                } else if constexpr (std::is_same_v<T, Var>) {
                    return values_[slot_.at(n.name)];
                } else if constexpr (std::is_same_v<T, Unary>) {
                    return -eval(*n.operand, rng);
                } else if constexpr (std::is_same_v<T, Binary>) {
                    double a = eval(*n.lhs, rng);
                    double b = eval(*n.rhs, rng);
                    switch (n.op) {
                        case '+': return a + b;
                        case '-': return a - b;
                        case '*': return a * b;
                        default: return a / b;
                    }
                } else {
                    double a0 = eval(*n.args[0], rng);
                    if (n.fn == "sin") return std::sin(a0);
                    if (n.fn == "cos") return std::cos(a0);
                    if (n.fn == "abs") return std::abs(a0);
                    double a1 = eval(*n.args[1], rng);
                    return n.fn == "min" ? std::min(a0, a1)
                                         : std::max(a0, a1);
                }
            },
            e.node);
    }

    void exec(const CompiledStmt& st, RngStream& rng) {
        double value = std::visit(
            [&](const auto& rhs) -> double {
                using T = std::decay_t<decltype(rhs)>;
                if constexpr (std::is_same_v<T, ExprPtr>) {
                    return eval(*rhs, rng);
                } else if constexpr (std::is_same_v<T, DistCall>) {
                    double a0 = eval(*rhs.arg0, rng);
                    double a1 = eval(*rhs.arg1, rng);
                    switch (rhs.kind) {
                        case DistKind::Uniform: return rng.uniform(a0, a1);
                        case DistKind::Normal:
                            return rng.normal(a0, std::sqrt(a1));
                        default: return rng.beta(a0, a1);
                    }
                } else {
                    // Draw first so both branches consume identical
                    // randomness regardless of outcome.
                    bool take_first = rng.uniform01() < rhs.probability;
                    double a = eval(*rhs.first, rng);
                    double b = eval(*rhs.second, rng);
                    return take_first ? a : b;
                }
            },
            *st.rhs);
        if (!std::isfinite(value))
            throw NumericOverflow("non-finite value assigned in simulation");
        values_[st.target] = value;
    }

    const LoopProgram& prog_;
    std::unordered_map<std::string, std::size_t> slot_;
    std::vector<CompiledStmt> init_, body_;
    std::vector<std::size_t> output_slots_;
    std::vector<double> values_;
};

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

}  // namespace

LoopProgram parse_loop_program(const std::string& source) {
    return Parser(tokenize(source)).parse();
}

std::string pretty_print(const LoopProgram& program) {
    std::ostringstream os;
    for (const auto& st : program.init) print_statement(os, st, "");
    os << "while (True):\n";
    for (const auto& st : program.body) print_statement(os, st, "    ");
    os << "end\n";
    return os.str();
}

std::vector<std::vector<double>> simulate(const SimulationSpec& spec) {
    if (spec.iterations < 1 || spec.replications < 1)
        throw Error("simulate: iterations and replications must be >= 1");
    const auto R = std::size_t(spec.replications);
    std::vector<std::vector<double>> rows(R);

    int threads = resolve_threads(spec.threads);
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&](std::size_t begin, std::size_t end) {
        try {
            Interpreter interp(spec.program);
            for (std::size_t r = begin; r < end; ++r) {
                RngStream rng(spec.seed, r);
                try {
                    interp.run(spec.iterations, rng, rows[r]);
                } catch (const NumericOverflow&) {
                    throw NumericOverflow(
                        "replication " + std::to_string(r) +
                        ": non-finite intermediate value");
                }
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    if (threads <= 1 || R < 256) {
        worker(0, R);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (R + std::size_t(threads) - 1) / std::size_t(threads);
        for (int w = 0; w < threads; ++w) {
            std::size_t begin = std::size_t(w) * chunk;
            if (begin >= R) break;
            pool.emplace_back(worker, begin, std::min(begin + chunk, R));
        }
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return rows;
}

MomentTensor simulate_moments(const SimulationSpec& spec) {
    if (spec.iterations < 1 || spec.replications < 1)
        throw Error("simulate_moments: iterations and replications >= 1");
    const std::size_t k = spec.program.outputs.size();
    if (spec.degrees.size() != k)
        throw DimensionMismatch(
            "simulate_moments: one degree per output variable required");

    std::size_t grid = 1;
    for (int d : spec.degrees) grid *= std::size_t(d) + 1;

    const auto R = std::size_t(spec.replications);
    int threads = resolve_threads(spec.threads);
    std::size_t chunk = (R + std::size_t(threads) - 1) / std::size_t(threads);
    std::size_t workers = (R + chunk - 1) / chunk;

    std::vector<std::vector<double>> partial_sum(workers),
        partial_comp(workers);
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&](std::size_t w, std::size_t begin, std::size_t end) {
        try {
            Interpreter interp(spec.program);
            auto& sum = partial_sum[w];
            auto& comp = partial_comp[w];
            sum.assign(grid, 0.0);
            comp.assign(grid, 0.0);
            std::vector<double> row;
            std::vector<std::vector<double>> powers(k);
            for (std::size_t r = begin; r < end; ++r) {
                RngStream rng(spec.seed, r);
                try {
                    interp.run(spec.iterations, rng, row);
                } catch (const NumericOverflow&) {
                    throw NumericOverflow(
                        "replication " + std::to_string(r) +
                        ": non-finite intermediate value");
                }
                for (std::size_t j = 0; j < k; ++j) {
                    auto& p = powers[j];
                    p.assign(std::size_t(spec.degrees[j]) + 1, 1.0);
                    for (int d = 1; d <= spec.degrees[j]; ++d)
                        p[std::size_t(d)] = p[std::size_t(d) - 1] * row[j];
                }
                std::vector<int> index(k, 0);
                std::size_t flat = 0;
                do {
                    double prod = 1.0;
                    for (std::size_t j = 0; j < k; ++j)
                        prod *= powers[j][std::size_t(index[j])];
                    double y = prod - comp[flat];
                    double t = sum[flat] + y;
                    comp[flat] = (t - sum[flat]) - y;
                    sum[flat] = t;
                    ++flat;
                } while (MomentTensor::next_index(index, spec.degrees));
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    if (workers <= 1) {
        worker(0, 0, R);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(worker, w, w * chunk,
                              std::min((w + 1) * chunk, R));
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    // Merge partials in fixed worker order.
    std::vector<double> total(grid, 0.0);
    for (std::size_t w = 0; w < workers; ++w)
        if (!partial_sum[w].empty())
            for (std::size_t g = 0; g < grid; ++g)
                total[g] += partial_sum[w][g];
    for (double& v : total) v /= double(R);
    return MomentTensor(spec.degrees, std::move(total));
}

}  // namespace kseries
