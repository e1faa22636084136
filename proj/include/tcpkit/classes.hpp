#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcpkit/budget.hpp"
#include "tcpkit/tensor.hpp"

namespace tcpkit {

/// Structured tensor classes. Each tag (except Q) binds a failure-witness
/// system: a point satisfying that system certifies non-membership.
enum class ClassId {
    SemiPositive,
    StrictlySemiPositive,
    P0,
    P,
    WP,
    StrictlyCopositive,
    PositiveDefinite,
    R,
    R0,
    ER,
    Q,
};

std::string to_string(ClassId c);
ClassId class_from_string(const std::string& name);
std::vector<ClassId> all_classes();

/// Whether the failure system searches the nonnegative cone (x >= 0) or all
/// of R^n, and whether it carries the extra scalar t.
bool is_cone_system(ClassId c);
bool has_t_parameter(ClassId c);

class CapabilityError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A certified solution of a class's failure system. x is normalized to
/// max-norm 1 for cone systems and Euclidean norm 1 for sign-free systems;
/// components equal to zero are exact (snapped).
struct Witness {
    std::vector<double> x;
    std::optional<double> t;
    double residual = 0.0;
    ClassId system = ClassId::ER;
};

/// Canonical residual of the closed failure system at (x, t): the largest
/// equality defect or closed-inequality violation. Components exactly zero
/// are treated as off-support. Strict inequalities are checked separately
/// by the search, with margin Tolerances::strict_margin.
double witness_residual(const Tensor& a, ClassId c, std::span<const double> x,
                        std::optional<double> t);

enum class VerdictStatus { Member, NonMember, Unknown };

std::string to_string(VerdictStatus s);

/// Classification outcome. Member is only produced by the exhaustive
/// small-dimension analysis or an analytic shortcut; a fruitless multistart
/// search yields Unknown, never Member.
struct Verdict {
    VerdictStatus status = VerdictStatus::Unknown;
    std::optional<Witness> witness;
    std::string method;  // "exhaustive-n2" | "multistart" | "analytic" | "sampled"
    BudgetUsed budget_used;
};

/// Searches the failure system of `c`. For dim <= 2 the search is an
/// exhaustive support-pattern split with real-root isolation on the
/// normalized slice; otherwise seeded multistart local search.
std::optional<Witness> witness_search(const Tensor& a, ClassId c,
                                      const SearchBudget& budget);

Verdict classify(const Tensor& a, ClassId c, const SearchBudget& budget);

/// Runs classify for every class tag.
std::map<ClassId, Verdict> classify_all(const Tensor& a, const SearchBudget& budget);

struct AuditViolation {
    std::string rule;
    std::string detail;
};

/// Cross-checks definite verdicts against the known inclusions between the
/// classes (and re-validates attached witnesses against `a`). Unknown
/// verdicts never trigger a violation.
std::vector<AuditViolation> implication_audit(const Tensor& a,
                                              const std::map<ClassId, Verdict>& verdicts);

struct HeredityViolation {
    std::vector<int> subset;  // 1-based indices of the offending principal subtensor
    Verdict sub_verdict;
};

/// Checks a (claimed) membership of A against its principal subtensors: a
/// violation is a subtensor witness whose zero extension also satisfies the
/// off-support conditions of the full system, certifying non-membership of
/// A itself. `parent` overrides the classification of A.
std::vector<HeredityViolation> subtensor_heredity_check(
    const Tensor& a, ClassId c, const SearchBudget& budget,
    const std::optional<Verdict>& parent = std::nullopt);

}  // namespace tcpkit
