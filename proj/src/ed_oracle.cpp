#include "recmeth/ed_oracle.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cmath>

#include "recmeth/errors.hpp"

namespace recmeth {

namespace {

using Dense = Eigen::MatrixXd;
using Sparse = Eigen::SparseMatrix<double>;

struct RingWord {
    std::uint64_t xm = 0, zm = 0;
    int ny = 0;
};

RingWord place(const PauliWord& w, int at, int sites) {
    require(w.length() <= sites, "word " + w.to_string() + " does not fit on the ring");
    RingWord r;
    for (int j = 0; j < w.length(); ++j) {
        const int site = (at + j) % sites;
        const std::uint64_t bit = std::uint64_t{1} << site;
        const char c = w.letter(j);
        if (c == 'X' || c == 'Y') r.xm |= bit;
        if (c == 'Z' || c == 'Y') r.zm |= bit;
        if (c == 'Y') ++r.ny;
    }
    return r;
}

// W|s> = i^ny (-1)^{|s & zm|} |s ^ xm>
cplx element(const RingWord& w, std::uint64_t s) {
    cplx ph = i_pow(w.ny);
    if (std::popcount(s & w.zm) & 1) ph = -ph;
    return ph;
}

// Operator split into real and imaginary parts; an empty part is zero.
struct Split {
    Dense re, im;
};

double trace_norm2(const Split& o, double dim) {
    double s = 0;
    if (o.re.size()) s += o.re.squaredNorm();
    if (o.im.size()) s += o.im.squaredNorm();
    return s / dim;
}

Dense commutator(const Sparse& h, const Dense& a) {
    Dense out = h * a;
    out.noalias() -= a * h;
    return out;
}

}  // namespace

EdCoefficients ed_oracle_coeffs(const SpinHamiltonian& h, const TranslationInvariantOperator& o0, int sites,
                                int steps, std::size_t memory_budget) {
    require(sites >= 2 && sites <= 14, "ED oracle needs 2 <= L <= 14");
    require(steps >= 1 && steps <= 2 * sites, "ED oracle needs 1 <= N <= 2L");
    for (const auto& [w, c] : h.terms)
        require(w.y_count() % 2 == 0, "ED oracle supports Hamiltonians that are real in the Z basis");

    const std::size_t dim = std::size_t{1} << sites;
    bool need_re = false, need_im = false;
    for (const auto& [w, a] : o0.terms()) {
        cplx ph = a * i_pow(w.y_count());
        need_re |= ph.real() != 0;
        need_im |= ph.imag() != 0;
    }
    const std::size_t parts = (need_re ? 1 : 0) + (need_im ? 1 : 0);
    const std::size_t bytes = dim * dim * sizeof(double) * (3 * parts + 2);
    if (bytes > memory_budget)
        throw ResourceLimit("ED oracle at L=" + std::to_string(sites) + " needs " + std::to_string(bytes >> 20) +
                            " MiB");

    std::vector<Eigen::Triplet<double>> trip;
    for (int x = 0; x < sites; ++x)
        for (const auto& [w, c] : h.terms) {
            const RingWord rw = place(w, x, sites);
            for (std::uint64_t s = 0; s < dim; ++s)
                trip.emplace_back(static_cast<int>(s ^ rw.xm), static_cast<int>(s), c * element(rw, s).real());
        }
    Sparse hm(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    hm.setFromTriplets(trip.begin(), trip.end());
    trip.clear();
    trip.shrink_to_fit();

    Split cur;
    if (need_re) cur.re = Dense::Zero(dim, dim);
    if (need_im) cur.im = Dense::Zero(dim, dim);
    for (int x = 0; x < sites; ++x)
        for (const auto& [w, a] : o0.terms()) {
            const RingWord rw = place(w, x, sites);
            for (std::uint64_t s = 0; s < dim; ++s) {
                const cplx v = a * element(rw, s);
                if (need_re) cur.re(s ^ rw.xm, s) += v.real();
                if (need_im) cur.im(s ^ rw.xm, s) += v.imag();
            }
        }
    const double d = static_cast<double>(dim);
    const double n0 = std::sqrt(trace_norm2(cur, d));
    require(n0 > 0, "initial operator vanishes on the ring");
    if (need_re) cur.re /= n0;
    if (need_im) cur.im /= n0;

    const int s0 = o0.max_length();
    const int grow = h.range() - 1;
    EdCoefficients out;
    Split prev;
    double b_cur = 1.0;
    for (int n = 0; n < steps; ++n) {
        Split next;
        if (need_re) {
            next.re = commutator(hm, cur.re);
            if (prev.re.size()) next.re -= b_cur * prev.re;
        }
        if (need_im) {
            next.im = commutator(hm, cur.im);
            if (prev.im.size()) next.im -= b_cur * prev.im;
        }
        const double b = std::sqrt(trace_norm2(next, d));
        if (!(b > 1e-13)) break;
        if (need_re) next.re /= b;
        if (need_im) next.im /= b;
        out.b.push_back(b);
        out.reliable.push_back(s0 + (n + 1) * grow < sites);
        prev = std::move(cur);
        cur = std::move(next);
        b_cur = b;
    }
    return out;
}

}  // namespace recmeth
