#pragma once

// Linear algebra of bosonic operator expansions.
//
// Every operator in the model is a linear combination of the fundamental
// input annihilation and creation operators:
//
//     o = sum_k u_k m_k + v_k m_k^dag
//
// With all inputs in vacuum, the moments of o depend only on (u, v).

#include <complex>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace opo {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Tolerance for algebraic identities (canonicity, associativity).
inline constexpr double kAlgebraTol = 1e-12;

class BasisMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Ordered, immutable set of fundamental input mode labels.
class ModeBasis {
public:
    explicit ModeBasis(std::vector<std::string> labels);

    /// The four vacuum inputs of the cavity: a_in, b_in, f_L,in, f_R,in.
    static std::shared_ptr<const ModeBasis> cavity_inputs();

    std::size_t size() const noexcept { return labels_.size(); }
    const std::string& label(std::size_t k) const { return labels_.at(k); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::size_t index_of(const std::string& label) const;

    friend bool operator==(const ModeBasis& a, const ModeBasis& b) { return a.labels_ == b.labels_; }

private:
    std::vector<std::string> labels_;
};

using BasisPtr = std::shared_ptr<const ModeBasis>;

/// A mode operator resolved over a ModeBasis: u multiplies the
/// annihilators, v the creators.
class OperatorExpansion {
public:
    OperatorExpansion(BasisPtr basis, CVector u, CVector v);

    static OperatorExpansion zero(BasisPtr basis);
    /// Pure annihilator of basis mode k.
    static OperatorExpansion mode(BasisPtr basis, std::size_t k);
    static OperatorExpansion mode(BasisPtr basis, const std::string& label);

    const BasisPtr& basis() const noexcept { return basis_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(u_.size()); }
    const CVector& u() const noexcept { return u_; }
    const CVector& v() const noexcept { return v_; }

    /// Hermitian conjugate: (u, v) -> (conj v, conj u).
    OperatorExpansion dagger() const;

    bool same_basis(const OperatorExpansion& other) const noexcept;

    friend OperatorExpansion operator+(const OperatorExpansion& a, const OperatorExpansion& b);
    friend OperatorExpansion operator-(const OperatorExpansion& a, const OperatorExpansion& b);
    friend OperatorExpansion operator*(cplx s, const OperatorExpansion& o);

    friend bool operator==(const OperatorExpansion& a, const OperatorExpansion& b);

private:
    BasisPtr basis_;
    CVector u_;
    CVector v_;
};

/// [o1, o2^dag] = sum_k u1_k conj(u2_k) - v1_k conj(v2_k).
cplx commutator(const OperatorExpansion& o1, const OperatorExpansion& o2);

/// <o^dag o> with every input in vacuum.
double vacuum_photon_number(const OperatorExpansion& o);

/// <o1^dag o2> with every input in vacuum.
cplx vacuum_cross_moment(const OperatorExpansion& o1, const OperatorExpansion& o2);

/// Linear map over a fixed number of ports:
///
///     out_i = sum_j U_ij in_j + V_ij in_j^dag
///
/// Operates on whatever the ports carry (basis modes or other expansions).
class BogoliubovMap {
public:
    BogoliubovMap(CMatrix U, CMatrix V);

    static BogoliubovMap identity(std::size_t ports);

    std::size_t ports() const noexcept { return static_cast<std::size_t>(U_.rows()); }
    const CMatrix& U() const noexcept { return U_; }
    const CMatrix& V() const noexcept { return V_; }

    /// The 2n x 2n matrix acting on (in, in^dag).
    CMatrix doubled() const;

    /// Largest entrywise violation of U U^dag - V V^dag = 1 and
    /// U V^T = V U^T.
    double canonical_deviation() const;
    bool is_canonical(double tol = kAlgebraTol) const { return canonical_deviation() <= tol; }

    /// Inverse of a canonical map: (U^dag, -V^T). Throws if not canonical.
    BogoliubovMap inverse() const;

private:
    CMatrix U_;
    CMatrix V_;
};

std::vector<OperatorExpansion> apply_map(const BogoliubovMap& m, const std::vector<OperatorExpansion>& ops);

/// m1 first, then m2.
BogoliubovMap compose(const BogoliubovMap& m2, const BogoliubovMap& m1);

/// Largest entrywise |a - b| over both blocks.
double max_abs_difference(const BogoliubovMap& a, const BogoliubovMap& b);

}  // namespace opo
