/// @file evaluation.hpp
/// @brief Value scale, ranking, card presentation and the multiplicative
/// transform of a consistent preference matrix.

#pragma once

#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "json.hpp"
#include "ttm/core_model.hpp"

namespace ttm {

using Rational = boost::rational<Units>;

/// "3/5", "1", "0", "-2/7".
std::string to_string(const Rational& value);

struct ValueScale {
    /// Units above the worst object (u[worst] == 0), indexed by object id.
    std::vector<Units> u;
    /// u / u[winner], exact.
    std::vector<Rational> v;
    ObjectId worst = 0;
    ObjectId winner = 0;
    /// All differences are zero; v is all zero.
    bool degenerate = false;

    bool operator==(const ValueScale&) const = default;
};

/// Normalized scale anchored at the worst object k* = argmax_k M[champion][k]
/// (smallest id on ties). Throws inconsistent, naming a violating triple,
/// unless M passes the pivot certificate at `champion`; throws
/// invalid_argument if some object is preferred to `champion`.
ValueScale value_scale(const PreferenceMatrix& matrix, ObjectId champion);

/// Smallest id whose row has no negative entry, i.e. a top object of a
/// consistent matrix. Throws inconsistent if there is none.
ObjectId find_champion(const PreferenceMatrix& matrix);

/// entries[i][j] = u[i] - u[j].
PreferenceMatrix reconstruct_matrix(std::span<const Units> u);

/// Best group first; equal scores share a group, ordered by id.
using Ranking = std::vector<std::vector<ObjectId>>;
Ranking ranking(const ValueScale& scale);

/// Blank cards between consecutive rank groups (unit gap minus one).
/// Throws invalid_argument on a degenerate scale.
std::vector<Units> card_distribution(const ValueScale& scale, const Ranking& ranks);

class MultiplicativeMatrix {
public:
    MultiplicativeMatrix(std::size_t m, double base) : m_(m), base_(base), entries_(m * m, 1.0) {}

    std::size_t size() const noexcept { return m_; }
    double base() const noexcept { return base_; }
    double at(ObjectId i, ObjectId j) const { return entries_[i * m_ + j]; }
    double& at(ObjectId i, ObjectId j) { return entries_[i * m_ + j]; }

private:
    std::size_t m_;
    double base_;
    std::vector<double> entries_;
};

/// entries[i][j] = base^M[i][j]. Throws invalid_argument unless base > 1 and
/// structural unless M is reciprocal.
MultiplicativeMatrix to_multiplicative(const PreferenceMatrix& matrix, double base = 2.0);

/// Results document:
/// {"cards_between", "degenerate", "ranking", "u", "v", "v_decimal"}.
/// v_decimal is rounded to four fractional digits.
nlohmann::json results_document(const ObjectSet& objects, const ValueScale& scale);

/// Fixed four-digit rendering used by the CLI reports.
std::string format_decimal(const Rational& value);

} // namespace ttm
