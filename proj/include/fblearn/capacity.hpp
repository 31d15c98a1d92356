#ifndef FBLEARN_CAPACITY_HPP
#define FBLEARN_CAPACITY_HPP

#include <cstddef>
#include <vector>

#include "fblearn/channel.hpp"

namespace fblearn {

/// Capacity plus the extremal conditional information variance over the
/// capacity-achieving input polytope.
struct CapacityDispersion {
    double capacity = 0.0;        // bits/use
    Dist caod;                    // capacity-achieving output distribution (unique)
    Dist caid_witness;            // one capacity-achieving input
    double dispersion_min = 0.0;  // bits^2
    double dispersion_max = 0.0;  // bits^2
    bool unique_caid = true;

    /// V^eps of the dispersion definition: max branch for eps > 1/2,
    /// min branch for eps < 1/2.
    double dispersion_for(double epsilon) const {
        return epsilon > 0.5 ? dispersion_max : dispersion_min;
    }
};

struct BlahutArimotoResult {
    double capacity = 0.0;  // bits
    Dist caid_witness;
    Dist caod;
    std::size_t iterations = 0;
    double gap = 0.0;  // certified upper - lower bound at termination
    std::vector<double> lower_trace;  // per-iteration lower bounds
};

/// Alternating-maximization capacity solver with a certified bracket:
/// lower bound I(caid_witness, w), upper bound max_x D(W(.|x) || caod),
/// terminating when the gap is <= tol. Throws NotConverged past max_iter.
BlahutArimotoResult blahut_arimoto(const Dmc& w, double tol = 1e-10,
                                   std::size_t max_iter = 100000);

/// Inputs with D(W(.|x) || caod) >= capacity - slack. Every capacity-achieving
/// input distribution is supported inside this set.
std::vector<std::size_t> caid_support(const Dmc& w, const Dist& caod, double capacity,
                                      double slack = 1e-7);

/// E_X[ Var_{Y~W(.|x)} log2(W(Y|x)/caod(Y)) ], the conditional information
/// variance averaged over X.
double conditional_dispersion(const Dmc& w, const Dist& px, const Dist& caod);

/// Solves the dispersion extremization linear program over the CAID polytope
/// and fills every CapacityDispersion field. epsilon must not be 1/2.
CapacityDispersion dispersion_extremal(const Dmc& w, double epsilon);

}  // namespace fblearn

#endif
