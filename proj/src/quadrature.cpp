#include "attractorlab/quadrature.hpp"

namespace attractorlab {

double integrate_coefficient(const HullPoint& hp, double t0, double t1, double step) {
    if (t0 == t1) return 0.0;
    if (t1 < t0) return -integrate_coefficient(hp, t1, t0, step);

    std::vector<double> nodes{t0, t1};
    append_breakpoints(hp, t0, t1, nodes);
    std::sort(nodes.begin(), nodes.end());

    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const auto f = [&](double s) { return evaluate(hp, s); };
        sum += simpson_smooth(f, nodes[i], nodes[i + 1], step);
    }
    return sum;
}

}  // namespace attractorlab
