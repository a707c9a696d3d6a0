#pragma once

#include <functional>
#include <string>
#include <vector>

namespace recmeth {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// Ordinary least squares y = slope x + intercept.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

enum class Growth { Bounded, Divergent, Indeterminate };

std::string to_string(Growth g);

struct IncrementReport {
    Growth growth = Growth::Indeterminate;
    double decay_power = 0.0;  // p in |d_j| ~ j^-p over the tail
    int sign = 0;              // common sign of the tail increments, 0 if mixed
    double total = 0.0;        // sum of all increments
};

// Classifies a running total from its increments d_j between successive dyadic checkpoints
// (checkpoint index j = first_j + position). Sum converges when |d_j| decays faster than 1/j.
IncrementReport classify_increments(const std::vector<double>& increments, int first_j = 1);

// Composite Simpson on [a, b] with an even number of panels.
double simpson(const std::function<double(double)>& f, double a, double b, int panels);

}  // namespace recmeth
