/// @file matrix_builder.hpp
/// @brief Expands a finished match matrix into the complete additive
/// preference matrix.
///
/// The construction runs in five fixed steps:
///   1. allocate an empty m x m grid;
///   2. zero the diagonal;
///   3. copy every elicited match (and its negation);
///   4. walking the matches newest first, derive each loser's difference to
///      the champion through the object that beat it;
///   5. fill every remaining cell through the champion.
/// Step 4 must run newest first: the winner of match i either is the champion
/// or lost a later match, so its champion entry is already known.

#pragma once

#include <optional>
#include <vector>

#include "ttm/core_model.hpp"

namespace ttm {

/// Grid where unset cells are nullopt. Used to expose intermediate steps.
class PartialPreferenceMatrix {
public:
    explicit PartialPreferenceMatrix(std::size_t m) : m_(m), cells_(m * m) {}

    std::size_t size() const noexcept { return m_; }
    const std::optional<Units>& at(ObjectId i, ObjectId j) const { return cells_[i * m_ + j]; }

    /// Throws structural if the cell already holds a different value.
    void set(ObjectId i, ObjectId j, Units value);
    /// Throws structural if the cell is empty.
    Units get(ObjectId i, ObjectId j) const;

    bool complete() const;
    /// Throws structural unless complete().
    PreferenceMatrix to_matrix() const;

private:
    std::size_t m_;
    std::vector<std::optional<Units>> cells_;
};

enum class BuildStep {
    allocate = 1,
    diagonal = 2,
    elicited = 3,
    champion_column = 4,
    complete = 5,
};

/// Runs steps 1..last and returns the grid as it stands.
/// Throws structural on a malformed match matrix.
PartialPreferenceMatrix build_until(const MatchMatrix& matches, BuildStep last);

PreferenceMatrix build_preference_matrix(const MatchMatrix& matches);

/// True iff M[i][j] = M[i][pivot] + M[pivot][j] for every i, j, which is
/// sufficient for additive consistency.
bool pivot_consistency_certificate(const PreferenceMatrix& matrix, ObjectId pivot);

} // namespace ttm
