#pragma once

#include <stdexcept>
#include <string>

namespace simustab {

/// How a failure maps onto a process exit code: bad input (1), data that
/// fails a feasibility hypothesis (2), numerical/degeneracy breakdown (3).
enum class FailureClass { config, infeasible, numerical };

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual FailureClass failure_class() const { return FailureClass::numerical; }
};

#define SIMUSTAB_DEFINE_ERROR(Name, Class)                                     \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& what) : Error(what) {}                \
        FailureClass failure_class() const override { return FailureClass::Class; } \
    }

// input / orchestration
SIMUSTAB_DEFINE_ERROR(ConfigError, config);
SIMUSTAB_DEFINE_ERROR(IOError, config);

// rational-matrix algebra
SIMUSTAB_DEFINE_ERROR(DegreeError, numerical);
SIMUSTAB_DEFINE_ERROR(ShapeError, numerical);
SIMUSTAB_DEFINE_ERROR(PoleEvaluation, numerical);
SIMUSTAB_DEFINE_ERROR(SingularMatrix, numerical);

// interpolation-data extraction
SIMUSTAB_DEFINE_ERROR(DegeneratePencil, numerical);
SIMUSTAB_DEFINE_ERROR(ImproperPencil, numerical);
SIMUSTAB_DEFINE_ERROR(NonSimpleZero, numerical);
SIMUSTAB_DEFINE_ERROR(BoundaryZero, numerical);
SIMUSTAB_DEFINE_ERROR(RankAssumptionViolated, numerical);
SIMUSTAB_DEFINE_ERROR(UnassignableDirection, numerical);
SIMUSTAB_DEFINE_ERROR(AlphaInfeasible, infeasible);
SIMUSTAB_DEFINE_ERROR(BranchCutError, infeasible);
SIMUSTAB_DEFINE_ERROR(NotCaratheodoryData, infeasible);
SIMUSTAB_DEFINE_ERROR(NoRealBase, numerical);

// interpolation solver
SIMUSTAB_DEFINE_ERROR(DegenerateNodeSet, numerical);
SIMUSTAB_DEFINE_ERROR(InternalPositivityError, numerical);
SIMUSTAB_DEFINE_ERROR(ContinuationFailure, numerical);
SIMUSTAB_DEFINE_ERROR(InfeasibleData, infeasible);
SIMUSTAB_DEFINE_ERROR(OutsideDomain, numerical);

// synthesis
SIMUSTAB_DEFINE_ERROR(NotAUnit, infeasible);
SIMUSTAB_DEFINE_ERROR(InterpolationMismatch, infeasible);
SIMUSTAB_DEFINE_ERROR(RangeError, numerical);
SIMUSTAB_DEFINE_ERROR(DegenerateFamily, numerical);
SIMUSTAB_DEFINE_ERROR(InvalidPlant, config);

#undef SIMUSTAB_DEFINE_ERROR

}  // namespace simustab
