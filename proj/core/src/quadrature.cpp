#include "kwle/quadrature.hpp"

#include <algorithm>
#include <sstream>

namespace kwle {
namespace detail {

void gl15_unit(std::array<double, 15>& x, std::array<double, 15>& w) {
    // ascending nodes on (0,1), weights sum to 1
    for (int i = 0; i < 7; ++i) {
        x[i] = 0.5 * (1.0 - gl15_nodes[7 - i]);
        w[i] = 0.5 * gl15_weights[7 - i];
    }
    x[7] = 0.5;
    w[7] = 0.5 * gl15_weights[0];
    for (int i = 8; i < 15; ++i) {
        x[i] = 0.5 * (1.0 + gl15_nodes[i - 7]);
        w[i] = 0.5 * gl15_weights[i - 7];
    }
}

std::vector<Panel> graded_panels(int depth) {
    depth = std::clamp(depth, 2, 300);
    std::vector<Panel> panels;
    panels.reserve(2 * (depth + 1));
    // left half, u-space: (0, 2^-d], [2^-d, 2^-d+1], ..., [1/4, 1/2]
    panels.push_back({0.0, std::ldexp(1.0, -depth), false});
    for (int k = depth; k >= 2; --k)
        panels.push_back({std::ldexp(1.0, -k), std::ldexp(1.0, -(k - 1)), false});
    // right half in s = 1-u space, appended so u stays ascending
    for (int k = 1; k <= depth - 1; ++k)
        panels.push_back({std::ldexp(1.0, -(k + 1)), std::ldexp(1.0, -k), true});
    panels.push_back({0.0, std::ldexp(1.0, -depth), true});
    return panels;
}

std::vector<int> depth_sequence(int max_depth) {
    max_depth = std::clamp(max_depth, 2, 300);
    std::vector<int> seq;
    int d = std::min(12, max_depth);
    seq.push_back(d);
    while (d < max_depth) {
        d = std::min(2 * d, max_depth);
        seq.push_back(d);
    }
    if (seq.size() < 2) seq.push_back(max_depth);  // always at least one refinement
    return seq;
}

std::string nonconvergence_message(const char* name, int depth, double value, double err) {
    std::ostringstream os;
    os << name << ": not converged at depth " << depth << " (value " << value;
    if (err > 0.0) os << ", last refinement change " << err;
    os << ")";
    return os.str();
}

}  // namespace detail
}  // namespace kwle
