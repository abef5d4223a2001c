/// @file evaluation.cpp

#include "ttm/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "ttm/error.hpp"
#include "ttm/matrix_builder.hpp"

namespace ttm {

std::string to_string(const Rational& value) {
    if (value.denominator() == 1) {
        return std::to_string(value.numerator());
    }
    return std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
}

namespace {

double to_double(const Rational& value) {
    return static_cast<double>(value.numerator()) / static_cast<double>(value.denominator());
}

double round4(const Rational& value) {
    return std::round(to_double(value) * 10000.0) / 10000.0;
}

} // namespace

std::string format_decimal(const Rational& value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", round4(value));
    return buf;
}

ValueScale value_scale(const PreferenceMatrix& matrix, ObjectId champion) {
    const auto m = matrix.size();
    if (champion >= m) {
        throw Error(ErrorCode::invalid_argument, "champion out of range", "champion");
    }
    if (!check_reciprocity(matrix)) {
        throw Error(ErrorCode::inconsistent, "matrix is not reciprocal");
    }
    if (!pivot_consistency_certificate(matrix, champion)) {
        for (ObjectId i = 0; i < m; ++i) {
            for (ObjectId j = 0; j < m; ++j) {
                const Units residual = add_units(add_units(matrix.at(i, champion), matrix.at(champion, j)),
                                                 -matrix.at(i, j));
                if (residual != 0) {
                    throw Error(ErrorCode::inconsistent,
                                "matrix is inconsistent: triple (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ", " + std::to_string(champion) +
                                    ") has residual " + std::to_string(residual));
                }
            }
        }
    }
    for (ObjectId i = 0; i < m; ++i) {
        if (matrix.at(i, champion) > 0) {
            throw Error(ErrorCode::invalid_argument,
                        "object " + std::to_string(i) + " is preferred to the champion",
                        "champion");
        }
    }

    ValueScale scale;
    scale.winner = champion;
    for (ObjectId k = 1; k < m; ++k) {
        if (matrix.at(champion, k) > matrix.at(champion, scale.worst)) {
            scale.worst = k;
        }
    }
    const Units span = matrix.at(champion, scale.worst);
    scale.degenerate = span == 0;
    for (ObjectId i = 0; i < m; ++i) {
        scale.u.push_back(matrix.at(i, scale.worst));
        scale.v.push_back(scale.degenerate ? Rational(0) : Rational(scale.u.back(), span));
    }
    return scale;
}

ObjectId find_champion(const PreferenceMatrix& matrix) {
    for (ObjectId i = 0; i < matrix.size(); ++i) {
        bool top = true;
        for (ObjectId j = 0; j < matrix.size() && top; ++j) {
            top = matrix.at(i, j) >= 0;
        }
        if (top) {
            return i;
        }
    }
    throw Error(ErrorCode::inconsistent, "no object is weakly preferred to all others");
}

PreferenceMatrix reconstruct_matrix(std::span<const Units> u) {
    auto out = PreferenceMatrix::zero(u.size());
    for (ObjectId i = 0; i < u.size(); ++i) {
        for (ObjectId j = 0; j < u.size(); ++j) {
            out.at(i, j) = add_units(u[i], -u[j]);
        }
    }
    return out;
}

Ranking ranking(const ValueScale& scale) {
    std::vector<ObjectId> order(scale.v.size());
    std::iota(order.begin(), order.end(), ObjectId{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](ObjectId a, ObjectId b) { return scale.v[a] > scale.v[b]; });
    Ranking groups;
    for (const ObjectId id : order) {
        if (groups.empty() || scale.v[groups.back().front()] != scale.v[id]) {
            groups.emplace_back();
        }
        groups.back().push_back(id);
    }
    return groups;
}

std::vector<Units> card_distribution(const ValueScale& scale, const Ranking& ranks) {
    if (scale.degenerate) {
        throw Error(ErrorCode::invalid_argument, "degenerate scale has no card gaps");
    }
    std::vector<Units> cards;
    for (std::size_t g = 0; g + 1 < ranks.size(); ++g) {
        const Units gap = scale.u[ranks[g].front()] - scale.u[ranks[g + 1].front()];
        if (gap < 1) {
            throw Error(ErrorCode::invalid_argument, "rank groups are not strictly decreasing");
        }
        cards.push_back(gap - 1);
    }
    return cards;
}

MultiplicativeMatrix to_multiplicative(const PreferenceMatrix& matrix, double base) {
    if (!(base > 1.0) || !std::isfinite(base)) {
        throw Error(ErrorCode::invalid_argument, "base must be a finite real greater than 1",
                    "base");
    }
    if (!check_reciprocity(matrix)) {
        throw Error(ErrorCode::structural, "matrix is not reciprocal");
    }
    MultiplicativeMatrix out(matrix.size(), base);
    for (ObjectId i = 0; i < matrix.size(); ++i) {
        for (ObjectId j = 0; j < matrix.size(); ++j) {
            out.at(i, j) = std::pow(base, static_cast<double>(matrix.at(i, j)));
        }
    }
    return out;
}

nlohmann::json results_document(const ObjectSet& objects, const ValueScale& scale) {
    const auto ranks = ranking(scale);
    nlohmann::json ranking_names = nlohmann::json::array();
    for (const auto& group : ranks) {
        nlohmann::json names = nlohmann::json::array();
        for (const ObjectId id : group) {
            names.push_back(objects.name(id));
        }
        ranking_names.push_back(std::move(names));
    }
    nlohmann::json v = nlohmann::json::array();
    nlohmann::json v_decimal = nlohmann::json::array();
    for (const auto& value : scale.v) {
        v.push_back(to_string(value));
        v_decimal.push_back(round4(value));
    }
    return {
        {"cards_between", scale.degenerate ? std::vector<Units>{} : card_distribution(scale, ranks)},
        {"degenerate", scale.degenerate},
        {"ranking", std::move(ranking_names)},
        {"u", scale.u},
        {"v", std::move(v)},
        {"v_decimal", std::move(v_decimal)},
    };
}

} // namespace ttm
