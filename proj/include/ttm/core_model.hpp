/// @file core_model.hpp
/// @brief Domain types shared by the tournament, builder and evaluation
/// modules, plus the exact reciprocity and consistency checkers.
///
/// Objects are identified internally by 0-based ids. Names are only used at
/// the edges (CSV, JSON, prompts).

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace ttm {

using ObjectId = std::size_t;

/// Signed difference of attractiveness, in Deck-of-Cards units.
using Units = std::int64_t;

/// Knobs shared by the tournament engine, the revision editor and the front
/// ends.
struct ElicitationConfig {
    /// Permit an explicit "no difference" answer recorded as 0 units.
    bool allow_ties = false;
    /// Upper bound on blank cards per comparison; nullopt means unbounded.
    std::optional<Units> card_cap = 100;

    void check_cards(Units cards) const;

    bool operator==(const ElicitationConfig&) const = default;
};

/// The m objects under evaluation. Immutable after construction.
class ObjectSet {
public:
    /// Throws invalid_argument unless there are at least two unique,
    /// non-empty names.
    explicit ObjectSet(std::vector<std::string> names);

    std::size_t size() const noexcept { return names_.size(); }
    const std::string& name(ObjectId id) const { return names_.at(id); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    std::optional<ObjectId> find(std::string_view name) const;

    /// Like find() but throws not_found.
    ObjectId id_of(std::string_view name) const;

    /// "a1", "a2", ... for batch inputs that carry no names.
    static ObjectSet numbered(std::size_t m);

    bool operator==(const ObjectSet&) const = default;

private:
    std::vector<std::string> names_;
};

struct MatchRecord {
    ObjectId winner = 0;
    ObjectId loser = 0;
    Units units = 0;

    bool operator==(const MatchRecord&) const = default;
};

/// Chronological match log closed by the convention row
/// (champion, champion, 0). A valid matrix has exactly m rows.
struct MatchMatrix {
    std::vector<MatchRecord> rows;

    std::size_t size() const noexcept { return rows.size(); }
    ObjectId champion() const;

    /// Throws structural if the rows do not describe a finished single
    /// elimination tournament over ids 0..m-1.
    void validate() const;

    bool operator==(const MatchMatrix&) const = default;
};

/// Dense m x m additive preference matrix. Positive entry (i, j) means i is
/// preferred to j by that many units.
class PreferenceMatrix {
public:
    PreferenceMatrix() = default;
    static PreferenceMatrix zero(std::size_t m);

    /// Throws structural if the rows are not square.
    static PreferenceMatrix from_rows(const std::vector<std::vector<Units>>& rows);

    std::size_t size() const noexcept { return m_; }
    Units at(ObjectId i, ObjectId j) const { return entries_[i * m_ + j]; }
    Units& at(ObjectId i, ObjectId j) { return entries_[i * m_ + j]; }
    std::vector<std::vector<Units>> rows() const;

    bool operator==(const PreferenceMatrix&) const = default;

private:
    std::size_t m_ = 0;
    std::vector<Units> entries_;
};

struct Violation {
    ObjectId i = 0;
    ObjectId j = 0;
    ObjectId k = 0;
    /// entries[i][k] + entries[k][j] - entries[i][j]
    Units residual = 0;

    bool operator==(const Violation&) const = default;
};

struct ConsistencyReport {
    bool reciprocal = false;
    bool consistent = false;
    std::vector<Violation> violations;
};

bool check_reciprocity(const PreferenceMatrix& matrix);

/// Exhaustive O(m^3) scan. A non-reciprocal matrix is reported as such and
/// its consistency is not evaluated.
ConsistencyReport check_consistency(const PreferenceMatrix& matrix);

/// Overflow-checked addition; throws invalid_argument on overflow.
Units add_units(Units a, Units b);

// Interchange formats.

/// m lines of m comma-separated integers, no header, trailing newline.
std::string to_csv(const PreferenceMatrix& matrix);
/// `source` names the input in line-numbered diagnostics.
PreferenceMatrix preference_matrix_from_csv(std::string_view text,
                                            std::string_view source = "<input>");

nlohmann::json to_json(const PreferenceMatrix& matrix);
PreferenceMatrix preference_matrix_from_json(const nlohmann::json& doc);

} // namespace ttm
