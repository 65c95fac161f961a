#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cft/sympoly.hpp"

namespace cft {

// Rewrite-rule sets.  Free uses only the circle relation C^2 -> 1-S^2 and
// the derivation table D(P)=C, D(Q)=S, D(S)=C*F1, D(C)=-S*F1, D(F1)=F2.
// CaseV adds  M*Q*C -> L*P*S - 2,  W -> L*P*C + M*Q*S  and the closures
// F1 -> (M-L)*C*S/W,  F2 -> (((L-2M)S^2+(M-2L)C^2)F1 + 2F1^2)/W.
// CaseIV adds  M*Q*C -> -2,  F1 -> C/Q,  F2 -> -2SC/Q^2.
enum class Mode { Free, CaseIV, CaseV };

enum class CaseTag { I, II, III, IV, V };

const char* case_name(CaseTag t);

// Normal form of a fraction under the mode's ring rules, applied to fixpoint,
// then gcd-reduced.
SymFrac reduce(const SymFrac& e, Mode mode);
SymPoly reduce_poly(const SymPoly& e, Mode mode);

// Formal u-derivative under the mode's derivation table and closures.
SymFrac derive(const SymFrac& e, Mode mode);

// One cascade step: multiply the closed derivative through by the clearing
// variable (Omega for CaseV, q for CaseIV), reduce, divide out a leftover odd
// cos(phi) power and the full content.
struct StepResult {
    SymPoly poly;                 // normalized equation (= 0)
    SymPoly content;              // divided content (grlex-positive)
    int c_divided = 0;            // odd cos(phi) power divided out
    SymFrac pre;                  // pre-reduction value, for the numeric check
    SymFrac post;                 // content * C^j * poly
};
StepResult derive_step(const SymPoly& eq, Mode mode = Mode::CaseV);

// Leading-coefficient cross-multiplication: lc_P(hi)*lo - lc_P(lo)*hi,
// dropping the top power of p; content-normalized.
StepResult eliminate(const SymPoly& eq_hi, const SymPoly& eq_lo);

// --- trace -------------------------------------------------------------------

struct TraceEquation {
    std::string name;
    SymPoly poly;                       // the equation poly = 0
    std::string rule;                   // combine | adopt | derive | derive_step | eliminate | reduce
    std::vector<std::string> inputs;
    SymPoly content = SymPoly::from_int(1);
    std::vector<std::string> divided_factors;  // nonzero-by-hypothesis factors divided out
    std::string note;
    SymFrac pre;                        // step identity: pre == post modulo mode relations
    SymFrac post;
    Mode mode = Mode::Free;
    bool has_identity = false;
};

struct RefComparison {
    std::string target;
    bool printed_in_full = false;   // full polynomial vs leading term only
    bool match = false;
    std::string detail;
};

struct StepCheck {
    std::string equation;
    bool structural_ok = false;
    bool numeric_ok = false;
    int points = 0;
};

struct CascadeTrace {
    CaseTag tag;
    std::vector<std::string> hypotheses;
    std::vector<TraceEquation> equations;
    std::vector<RefComparison> comparisons;
    std::vector<StepCheck> checks;
    std::vector<std::string> errata;
    std::string conclusion;
    bool conclusion_certified = false;
    bool all_full_prints_matched = true;
    bool postconditions_ok = true;

    const TraceEquation& find(const std::string& name) const;
};

// Replay one case of the classification argument.  Deterministic; numeric
// step checks run at `check_points` relation-satisfying rational points.
CascadeTrace run_case(CaseTag tag, int check_points = 50, std::uint64_t seed = 20240901);

// Random point satisfying the mode's relations exactly (rational circle
// parametrization); used by the numeric cross-checks.
std::array<BigRat, kNumSyms> relation_point(Mode mode, std::uint64_t& state);

// Reference coefficient tables for the published case analysis (full prints
// of the cubic root and its first two descendants; leading terms beyond).
namespace reference {
const SymPoly& printed_root();       // a1 p^3 + a2 p^2 + a3 p + a4
const SymPoly& printed_step1();      // b1 p^3 + ... (full print)
const SymPoly& printed_elim1();      // c1 p^2 + ... (full print)
const SymPoly& elim1_content();      // lambda^2 (mu-lambda) sin(phi)
// leading terms: {target equation, power of P, power of S, coefficient poly}
struct LeadingTerm {
    const char* target;
    int p_power;
    int s_power;
    const char* coeff;
};
const std::vector<LeadingTerm>& leading_terms();
const SymPoly& final_leading_coeff();   // 32 (mu-lambda)^10
int final_s_degree();                   // 20
} // namespace reference

} // namespace cft
