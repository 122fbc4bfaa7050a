#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "kseries/moments.hpp"

namespace kseries {

/// AST for the probabilistic loop language:
///
///   program   := init* "while" "(" "True" ")" ":" body+ "end"
///   init      := ident ":=" (dist | expr)
///   body      := ident ":=" (dist | expr | branch)
///   dist      := ("Uniform"|"Normal"|"Beta") "(" expr "," expr ")"
///   branch    := expr "{" number "}" expr
///   expr      := + - * / unary-minus, parentheses, numbers, idents,
///                sin cos min max abs
///
/// `#` starts a line comment. Normal is parameterized as (mean, variance).
namespace loop {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Num {
    double value;
};
struct Var {
    std::string name;
};
struct Unary {
    char op;  // '-'
    ExprPtr operand;
};
struct Binary {
    char op;  // + - * /
    ExprPtr lhs, rhs;
};
struct Call {
    std::string fn;  // sin cos min max abs
    std::vector<ExprPtr> args;
};
struct Expr {
    std::variant<Num, Var, Unary, Binary, Call> node;
};

enum class DistKind { Uniform, Normal, Beta };

struct DistCall {
    DistKind kind;
    ExprPtr arg0, arg1;
};

/// value of `first` with probability p, else `second`.
struct Branch {
    ExprPtr first;
    double probability;
    ExprPtr second;
};

struct Statement {
    std::string target;
    std::variant<ExprPtr, DistCall, Branch> rhs;
};

}  // namespace loop

struct LoopProgram {
    std::vector<loop::Statement> init;
    std::vector<loop::Statement> body;
    /// Variables assigned by a non-draw body statement, in first-assignment
    /// order; these are what the program is understood to compute.
    std::vector<std::string> outputs;
};

struct SimulationSpec {
    LoopProgram program;
    std::int64_t iterations = 1;
    std::int64_t replications = 1;
    std::uint64_t seed = 0;
    /// Per output variable; required by simulate_moments.
    std::vector<int> degrees;
    /// 0 = hardware concurrency.
    int threads = 0;
};

/// Parse program text. Deterministic; rejects nested `while`, use before
/// assignment, unknown functions, and branch probabilities outside [0, 1].
LoopProgram parse_loop_program(const std::string& source);

/// Canonical re-rendering of a parsed program; parse(pretty_print(p)) is
/// structurally identical to p.
std::string pretty_print(const LoopProgram& program);

/// Row r = output values after exactly `iterations` body executions in
/// replication r. Replication r draws from a stream keyed by (seed, r), so
/// the matrix is bit-identical regardless of threading, and row r does not
/// change when more replications are requested. A non-finite intermediate
/// aborts with NumericOverflow naming the replication.
std::vector<std::vector<double>> simulate(const SimulationSpec& spec);

/// Streaming composition of simulate and sample_moments: never materializes
/// the observation matrix. Per-worker partial sums merge in worker order.
MomentTensor simulate_moments(const SimulationSpec& spec);

}  // namespace kseries
