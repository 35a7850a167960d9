#ifndef PONPLACE_MILP_HPP
#define PONPLACE_MILP_HPP

#include <map>
#include <string>
#include <vector>

#include "ponplace/network.hpp"
#include "ponplace/types.hpp"

namespace ponplace {

enum class VarKind { binary, continuous };
enum class ConstraintSense { le, eq, ge };

struct MilpVar {
    std::string name;
    VarKind kind = VarKind::continuous;
    double lower = 0.0;
    double upper = 0.0;  // +inf for unbounded

    bool operator==(const MilpVar&) const = default;
};

struct MilpTerm {
    int var = 0;  // index into MilpModel::variables
    double coeff = 0.0;

    bool operator==(const MilpTerm&) const = default;
};

struct MilpConstraint {
    std::string name;
    std::vector<MilpTerm> terms;
    ConstraintSense sense = ConstraintSense::le;
    double rhs = 0.0;
};

/// Solver-independent model. Objective sense is always minimize.
///
/// Variable naming scheme (fixed, relied on by the exporters and by
/// extract_placement):
///   x_v{V}_s{S}          assignment of vm V to server S        (binary)
///   a_s{S}               server S hosts at least one vm        (binary)
///   o_s{S}               ONU of server S is active             (binary)
///   w_u{U}_v{V}_s{S}     demand (U,V) fully hosted on S        (binary)
///   z_u{U}_v{V}_r{I}_r{J} demand (U,V) crosses rack pair (I,J) (binary)
///   f_r{I}_r{J}_c{C}     Gbps of rack pair (I,J) on channel C  (continuous)
/// o/w/z/f exist only when the traffic matrix is non-empty (without demands
/// no ONU can ever be active and the networking term is the constant 0).
///
/// Constraint families, emitted in order with ascending indices:
///   c1_v{V}       assignment:  sum_s x = 1
///   c2cap_s{S}    capacity:    sum_v req*x - cap*a <= 0
///   c2act_v{V}_s{S} activity:  x - a <= 0
///   c3{a,b,c}_u_v_s co-location linearization of w = x_u * x_v
///   c4{eg,in}_s{S} ONU caps:   sum t*(x - w) - C_onu*o <= 0
///   c5{a,b,c}_u_v_rI_rJ rack incidence linearization of z
///   c6bal_rI_rJ   flow balance: sum_c f = sum t*z
///   c6cap_rI_rJ_c{C} channel capacity: f <= cap(c)
///   c7            active-server cap: sum_s a <= max_active_servers
struct MilpModel {
    std::vector<MilpVar> variables;
    std::vector<MilpConstraint> constraints;
    std::vector<MilpTerm> objective;  // minimize

    int var_index(const std::string& name) const;
};

/// Name-based structural equality (variable declaration order may differ
/// after an LP re-parse; everything else must match exactly).
bool models_equal(const MilpModel& a, const MilpModel& b);

/// Builds the placement MILP for an instance. Throws on structurally
/// infeasible input (a VM larger than every server).
MilpModel build_model(const Instance& inst, Objective objective, const RoutingMap& map);

/// CPLEX-LP text.
std::string export_lp(const MilpModel& m);
MilpModel parse_lp(const std::string& text);

struct MpsOptions {
    // strict_fixed enforces the classical 8-character name fields; overlong
    // names throw unless mangle_long_names replaces them with deterministic
    // short names (original names listed in leading comment lines).
    bool strict_fixed = false;
    bool mangle_long_names = false;
};

/// MPS text in the traditional section layout; integer variables are wrapped
/// in MARKER INTORG/INTEND. Default mode widens name fields as needed.
std::string export_mps(const MilpModel& m, const MpsOptions& opts = {});
MilpModel parse_mps(const std::string& text);

struct MilpCheckReport {
    std::vector<Violation> violations;
    double objective_value = 0.0;

    bool ok() const { return violations.empty(); }
};

/// Verifies bounds, integrality and every constraint within tol, and
/// recomputes the objective. Throws if values misses a variable.
MilpCheckReport check_solution(const MilpModel& m,
                               const std::map<std::string, double>& values,
                               double tol = 1e-6);

/// Reads the placement out of an integer-feasible solution (x within tol of
/// 0/1, exactly one server per vm). Throws on non-integral or non-unique
/// assignments.
Placement extract_placement(const MilpModel& m,
                            const std::map<std::string, double>& values,
                            double tol = 1e-4);

/// Canonical variable values induced by a placement (x from the hosts, a/o/w/z
/// by their definitions, f the proportional channel split). The bridge between
/// the model and evaluate().
std::map<std::string, double> placement_values(const Instance& inst,
                                               const RoutingMap& map,
                                               const Placement& placement);

}  // namespace ponplace

#endif
