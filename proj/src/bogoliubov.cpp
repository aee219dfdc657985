#include "opo/bogoliubov.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace opo {

namespace {

bool all_finite(const CVector& x) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i].real()) || !std::isfinite(x[i].imag())) return false;
    }
    return true;
}

void require_same_basis(const OperatorExpansion& a, const OperatorExpansion& b) {
    if (!a.same_basis(b)) throw BasisMismatch("operator expansions are over different mode bases");
}

}  // namespace

ModeBasis::ModeBasis(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw std::invalid_argument("mode basis must contain at least one mode");
    std::set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size()) throw std::invalid_argument("mode basis labels must be unique");
}

BasisPtr ModeBasis::cavity_inputs() {
    static const BasisPtr basis =
        std::make_shared<const ModeBasis>(std::vector<std::string>{"a_in", "b_in", "f_L_in", "f_R_in"});
    return basis;
}

std::size_t ModeBasis::index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw std::out_of_range("no mode labelled '" + label + "' in basis");
    return static_cast<std::size_t>(it - labels_.begin());
}

OperatorExpansion::OperatorExpansion(BasisPtr basis, CVector u, CVector v)
    : basis_(std::move(basis)), u_(std::move(u)), v_(std::move(v)) {
    if (!basis_) throw std::invalid_argument("operator expansion needs a basis");
    const auto n = static_cast<Eigen::Index>(basis_->size());
    if (u_.size() != n || v_.size() != n) {
        std::ostringstream msg;
        msg << "expansion coefficient lengths (" << u_.size() << ", " << v_.size() << ") do not match basis size "
            << n;
        throw DimensionMismatch(msg.str());
    }
    if (!all_finite(u_) || !all_finite(v_)) throw std::domain_error("operator expansion has non-finite coefficients");
}

OperatorExpansion OperatorExpansion::zero(BasisPtr basis) {
    const auto n = static_cast<Eigen::Index>(basis->size());
    return OperatorExpansion(std::move(basis), CVector::Zero(n), CVector::Zero(n));
}

OperatorExpansion OperatorExpansion::mode(BasisPtr basis, std::size_t k) {
    const auto n = static_cast<Eigen::Index>(basis->size());
    if (k >= basis->size()) throw std::out_of_range("mode index outside basis");
    CVector u = CVector::Zero(n);
    u[static_cast<Eigen::Index>(k)] = 1.0;
    return OperatorExpansion(std::move(basis), std::move(u), CVector::Zero(n));
}

OperatorExpansion OperatorExpansion::mode(BasisPtr basis, const std::string& label) {
    const auto k = basis->index_of(label);
    return mode(std::move(basis), k);
}

OperatorExpansion OperatorExpansion::dagger() const {
    return OperatorExpansion(basis_, v_.conjugate(), u_.conjugate());
}

bool OperatorExpansion::same_basis(const OperatorExpansion& other) const noexcept {
    return basis_ == other.basis_ || *basis_ == *other.basis_;
}

OperatorExpansion operator+(const OperatorExpansion& a, const OperatorExpansion& b) {
    require_same_basis(a, b);
    return OperatorExpansion(a.basis_, a.u_ + b.u_, a.v_ + b.v_);
}

OperatorExpansion operator-(const OperatorExpansion& a, const OperatorExpansion& b) {
    require_same_basis(a, b);
    return OperatorExpansion(a.basis_, a.u_ - b.u_, a.v_ - b.v_);
}

OperatorExpansion operator*(cplx s, const OperatorExpansion& o) {
    return OperatorExpansion(o.basis_, s * o.u_, s * o.v_);
}

bool operator==(const OperatorExpansion& a, const OperatorExpansion& b) {
    return a.same_basis(b) && a.u_ == b.u_ && a.v_ == b.v_;
}

cplx commutator(const OperatorExpansion& o1, const OperatorExpansion& o2) {
    require_same_basis(o1, o2);
    // Eigen's dot() conjugates its left operand.
    return o2.u().dot(o1.u()) - o2.v().dot(o1.v());
}

double vacuum_photon_number(const OperatorExpansion& o) {
    return o.v().squaredNorm();
}

cplx vacuum_cross_moment(const OperatorExpansion& o1, const OperatorExpansion& o2) {
    require_same_basis(o1, o2);
    return o1.v().dot(o2.v());
}

BogoliubovMap::BogoliubovMap(CMatrix U, CMatrix V) : U_(std::move(U)), V_(std::move(V)) {
    if (U_.rows() != U_.cols() || V_.rows() != V_.cols() || U_.rows() != V_.rows() || U_.rows() == 0) {
        throw DimensionMismatch("Bogoliubov map needs square U and V of equal nonzero size");
    }
    if (!U_.allFinite() || !V_.allFinite()) throw std::domain_error("Bogoliubov map has non-finite entries");
}

BogoliubovMap BogoliubovMap::identity(std::size_t ports) {
    const auto n = static_cast<Eigen::Index>(ports);
    return BogoliubovMap(CMatrix::Identity(n, n), CMatrix::Zero(n, n));
}

CMatrix BogoliubovMap::doubled() const {
    const auto n = U_.rows();
    CMatrix S(2 * n, 2 * n);
    S << U_, V_, V_.conjugate(), U_.conjugate();
    return S;
}

double BogoliubovMap::canonical_deviation() const {
    const auto n = U_.rows();
    const CMatrix norm = U_ * U_.adjoint() - V_ * V_.adjoint() - CMatrix::Identity(n, n);
    const CMatrix sym = U_ * V_.transpose() - V_ * U_.transpose();
    return std::max(norm.cwiseAbs().maxCoeff(), sym.cwiseAbs().maxCoeff());
}

BogoliubovMap BogoliubovMap::inverse() const {
    if (!is_canonical()) throw std::domain_error("only canonical Bogoliubov maps have the symplectic inverse");
    return BogoliubovMap(U_.adjoint(), -V_.transpose());
}

std::vector<OperatorExpansion> apply_map(const BogoliubovMap& m, const std::vector<OperatorExpansion>& ops) {
    if (ops.size() != m.ports()) {
        std::ostringstream msg;
        msg << "map has " << m.ports() << " ports but " << ops.size() << " operators were supplied";
        throw DimensionMismatch(msg.str());
    }
    if (ops.empty()) return {};
    for (const auto& o : ops) require_same_basis(ops.front(), o);

    // Stack the port operators as rows: in = P_u m + P_v m^dag, then
    //   out = U in + V in^dag = (U P_u + V conj(P_v)) m + (U P_v + V conj(P_u)) m^dag.
    const auto p = static_cast<Eigen::Index>(ops.size());
    const auto n = static_cast<Eigen::Index>(ops.front().size());
    CMatrix Pu(p, n), Pv(p, n);
    for (Eigen::Index j = 0; j < p; ++j) {
        Pu.row(j) = ops[static_cast<std::size_t>(j)].u().transpose();
        Pv.row(j) = ops[static_cast<std::size_t>(j)].v().transpose();
    }
    const CMatrix Ou = m.U() * Pu + m.V() * Pv.conjugate();
    const CMatrix Ov = m.U() * Pv + m.V() * Pu.conjugate();

    std::vector<OperatorExpansion> out;
    out.reserve(ops.size());
    for (Eigen::Index i = 0; i < p; ++i) {
        out.emplace_back(ops.front().basis(), Ou.row(i).transpose(), Ov.row(i).transpose());
    }
    return out;
}

BogoliubovMap compose(const BogoliubovMap& m2, const BogoliubovMap& m1) {
    if (m1.ports() != m2.ports()) throw DimensionMismatch("cannot compose maps with different port counts");
    return BogoliubovMap(m2.U() * m1.U() + m2.V() * m1.V().conjugate(),
                         m2.U() * m1.V() + m2.V() * m1.U().conjugate());
}

double max_abs_difference(const BogoliubovMap& a, const BogoliubovMap& b) {
    if (a.ports() != b.ports()) throw DimensionMismatch("maps have different port counts");
    return std::max((a.U() - b.U()).cwiseAbs().maxCoeff(), (a.V() - b.V()).cwiseAbs().maxCoeff());
}

}  // namespace opo
