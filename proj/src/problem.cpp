#include "dtle/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dtle {

DTLEProblem::DTLEProblem(Mat a, Mat q) : A(std::move(a)), Q(std::move(q)) {
    if (A.rows() != A.cols()) throw DimensionError("DTLEProblem: A not square");
    if (!Q.same_shape(A)) throw DimensionError("DTLEProblem: Q shape differs from A");
    n = A.rows();
    const double asym = frobenius_norm(Q - Q.transpose());
    if (asym > 1e-10 * (1.0 + frobenius_norm(Q)))
        throw NotSymmetricError("DTLEProblem: Q not symmetric");
}

Partition Partition::balanced(std::size_t n, std::size_t m) {
    if (m == 0 || m > n) throw PartitionError("balanced partition: need 1 <= m <= n");
    Partition p;
    p.m = m;
    const std::size_t base = n / m;
    const std::size_t extra = n % m;
    p.sizes.resize(m);
    for (std::size_t i = 0; i < m; ++i) p.sizes[i] = base + (i < extra ? 1 : 0);
    p.offsets.resize(m);
    std::size_t off = 0;
    for (std::size_t i = 0; i < m; ++i) {
        p.offsets[i] = off;
        off += p.sizes[i];
    }
    return p;
}

Partition Partition::from_sizes(std::size_t n, std::vector<std::size_t> sizes) {
    if (sizes.empty()) throw PartitionError("partition: empty size list");
    std::size_t total = 0;
    for (std::size_t s : sizes) {
        if (s == 0) throw PartitionError("partition: zero-sized block");
        total += s;
    }
    if (total != n) throw PartitionError("partition: sizes do not sum to n");
    Partition p;
    p.m = sizes.size();
    p.sizes = std::move(sizes);
    p.offsets.resize(p.m);
    std::size_t off = 0;
    for (std::size_t i = 0; i < p.m; ++i) {
        p.offsets[i] = off;
        off += p.sizes[i];
    }
    return p;
}

double xi_bound(const LocalData& d) {
    const double na = frobenius_norm(d.A_ri);
    const double ne = frobenius_norm(d.E_li);
    return 2.0 * (na * na + ne * ne);
}

double default_step(const LocalData& d, double safety) {
    if (!(safety > 0.0 && safety < 1.0))
        throw ParameterError("default_step: safety must be in (0,1)");
    return safety * std::min(1.0, 1.0 / d.xi);
}

std::vector<LocalData> decompose(const DTLEProblem& p, std::size_t m,
                                 const std::optional<std::vector<std::size_t>>& sizes,
                                 double safety) {
    if (m == 0 || m > p.n)
        throw PartitionError("decompose: need 1 <= m <= n");
    Partition part = sizes ? Partition::from_sizes(p.n, *sizes) : Partition::balanced(p.n, m);
    if (part.m != m) throw PartitionError("decompose: size list length differs from m");

    const Mat e_n = Mat::identity(p.n);
    std::vector<LocalData> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        LocalData d;
        d.agent_id = i;
        d.offset = part.offsets[i];
        d.block = part.sizes[i];
        d.A_ri = p.A.row_block(d.offset, d.block);
        d.Q_li = p.Q.col_block(d.offset, d.block);
        d.E_li = e_n.col_block(d.offset, d.block);
        d.xi = xi_bound(d);
        d.alpha = default_step(d, safety);
        out.push_back(std::move(d));
    }
    return out;
}

namespace {

// The two residual blocks of f_i.
struct Residuals {
    Mat t1;  // n_i x n: Y^{ri} - A_ri X
    Mat t2;  // n x n_i: Y A_ri' - X E_li + Q_li
};

Residuals residual_blocks(const LocalData& d, const AgentEstimate& e) {
    const std::size_t n = d.A_ri.cols();
    if (e.X.rows() != n || e.X.cols() != n || e.Y.rows() != n || e.Y.cols() != n)
        throw DimensionError("local objective: estimate shape mismatch");
    Residuals r;
    r.t1 = e.Y.row_block(d.offset, d.block) - d.A_ri * e.X;
    r.t2 = e.Y * d.A_ri.transpose() - e.X * d.E_li + d.Q_li;
    return r;
}

}  // namespace

double local_objective(const LocalData& d, const AgentEstimate& e) {
    const Residuals r = residual_blocks(d, e);
    const double n1 = frobenius_norm(r.t1);
    const double n2 = frobenius_norm(r.t2);
    return 0.5 * (n1 * n1 + n2 * n2);
}

std::pair<Mat, Mat> local_gradients(const LocalData& d, const AgentEstimate& e) {
    const Residuals r = residual_blocks(d, e);
    Mat dx = (d.A_ri.transpose() * r.t1) * -1.0 - r.t2 * d.E_li.transpose();
    Mat dy = d.E_li * r.t1 + r.t2 * d.A_ri;
    return {std::move(dx), std::move(dy)};
}

}  // namespace dtle
