/// @file matrix_builder.cpp

#include "ttm/matrix_builder.hpp"

#include "ttm/error.hpp"

namespace ttm {

void PartialPreferenceMatrix::set(ObjectId i, ObjectId j, Units value) {
    auto& cell = cells_[i * m_ + j];
    if (cell && *cell != value) {
        throw Error(ErrorCode::structural,
                    "conflicting values for cell (" + std::to_string(i) + ", " +
                        std::to_string(j) + "): " + std::to_string(*cell) + " vs " +
                        std::to_string(value));
    }
    cell = value;
}

Units PartialPreferenceMatrix::get(ObjectId i, ObjectId j) const {
    const auto& cell = cells_[i * m_ + j];
    if (!cell) {
        throw Error(ErrorCode::structural, "read of empty cell (" + std::to_string(i) + ", " +
                                               std::to_string(j) + ")");
    }
    return *cell;
}

bool PartialPreferenceMatrix::complete() const {
    for (const auto& cell : cells_) {
        if (!cell) {
            return false;
        }
    }
    return true;
}

PreferenceMatrix PartialPreferenceMatrix::to_matrix() const {
    auto out = PreferenceMatrix::zero(m_);
    for (ObjectId i = 0; i < m_; ++i) {
        for (ObjectId j = 0; j < m_; ++j) {
            out.at(i, j) = get(i, j);
        }
    }
    return out;
}

PartialPreferenceMatrix build_until(const MatchMatrix& matches, BuildStep last) {
    matches.validate();
    const std::size_t m = matches.size();
    const auto& rows = matches.rows;
    const ObjectId champ = matches.champion();

    PartialPreferenceMatrix grid(m);
    if (last < BuildStep::diagonal) {
        return grid;
    }
    for (ObjectId i = 0; i < m; ++i) {
        grid.set(i, i, 0);
    }
    if (last < BuildStep::elicited) {
        return grid;
    }
    for (std::size_t r = 0; r + 1 < m; ++r) {
        grid.set(rows[r].winner, rows[r].loser, rows[r].units);
        grid.set(rows[r].loser, rows[r].winner, -rows[r].units);
    }
    if (last < BuildStep::champion_column) {
        return grid;
    }
    for (std::size_t back = 1; back < m; ++back) {
        const auto& row = rows[m - 1 - back];
        const Units to_champ =
            add_units(grid.get(row.loser, row.winner), grid.get(row.winner, champ));
        grid.set(row.loser, champ, to_champ);
        grid.set(champ, row.loser, -to_champ);
    }
    if (last < BuildStep::complete) {
        return grid;
    }
    for (ObjectId i = 0; i < m; ++i) {
        for (ObjectId j = i + 1; j < m; ++j) {
            if (grid.at(i, j)) {
                continue;
            }
            const Units value = add_units(grid.get(i, champ), grid.get(champ, j));
            grid.set(i, j, value);
            grid.set(j, i, -value);
        }
    }
    return grid;
}

PreferenceMatrix build_preference_matrix(const MatchMatrix& matches) {
    return build_until(matches, BuildStep::complete).to_matrix();
}

bool pivot_consistency_certificate(const PreferenceMatrix& matrix, ObjectId pivot) {
    const auto m = matrix.size();
    if (pivot >= m) {
        throw Error(ErrorCode::invalid_argument, "pivot out of range", "pivot");
    }
    for (ObjectId i = 0; i < m; ++i) {
        for (ObjectId j = 0; j < m; ++j) {
            Units through = 0;
            if (__builtin_add_overflow(matrix.at(i, pivot), matrix.at(pivot, j), &through) ||
                through != matrix.at(i, j)) {
                return false;
            }
        }
    }
    return true;
}

} // namespace ttm
