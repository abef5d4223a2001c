/// @file core_model.cpp

#include "ttm/core_model.hpp"

#include <set>
#include <sstream>

#include "text_util.hpp"
#include "ttm/error.hpp"

namespace ttm {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::conflict: return "conflict";
    case ErrorCode::version_conflict: return "version_conflict";
    case ErrorCode::structural: return "structural";
    case ErrorCode::inconsistent: return "inconsistent";
    case ErrorCode::schema: return "schema";
    case ErrorCode::parse: return "parse";
    case ErrorCode::io: return "io";
    }
    return "unknown";
}

void ElicitationConfig::check_cards(Units cards) const {
    if (cards < 0) {
        throw Error(ErrorCode::invalid_argument, "cards must be non-negative", "cards");
    }
    if (card_cap && cards > *card_cap) {
        throw Error(ErrorCode::invalid_argument,
                    "cards " + std::to_string(cards) + " exceed the cap of " +
                        std::to_string(*card_cap),
                    "cards");
    }
}

// ---------------------------------------------------------------------------
// ObjectSet

ObjectSet::ObjectSet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.size() < 2) {
        throw Error(ErrorCode::invalid_argument, "tournament requires at least two objects",
                    "objects");
    }
    std::set<std::string_view> seen;
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (detail::trim(names_[i]).empty()) {
            throw Error(ErrorCode::invalid_argument, "object names must be non-empty",
                        "objects/" + std::to_string(i));
        }
        if (names_[i].find_first_of("\r\n") != std::string::npos) {
            throw Error(ErrorCode::invalid_argument, "object names must be a single line",
                        "objects/" + std::to_string(i));
        }
        if (!seen.insert(names_[i]).second) {
            throw Error(ErrorCode::invalid_argument, "duplicate object name '" + names_[i] + "'",
                        "objects/" + std::to_string(i));
        }
    }
}

std::optional<ObjectId> ObjectSet::find(std::string_view name) const {
    for (ObjectId i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) {
            return i;
        }
    }
    return std::nullopt;
}

ObjectId ObjectSet::id_of(std::string_view name) const {
    if (auto id = find(name)) {
        return *id;
    }
    throw Error(ErrorCode::not_found, "unknown object '" + std::string(name) + "'");
}

ObjectSet ObjectSet::numbered(std::size_t m) {
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= m; ++i) {
        names.push_back("a" + std::to_string(i));
    }
    return ObjectSet(std::move(names));
}

// ---------------------------------------------------------------------------
// MatchMatrix

ObjectId MatchMatrix::champion() const {
    if (rows.empty()) {
        throw Error(ErrorCode::structural, "match matrix is empty");
    }
    return rows.back().winner;
}

void MatchMatrix::validate() const {
    const std::size_t m = rows.size();
    if (m < 2) {
        throw Error(ErrorCode::structural, "match matrix needs at least two rows");
    }
    const auto& last = rows.back();
    if (last.winner != last.loser || last.units != 0) {
        throw Error(ErrorCode::structural,
                    "missing convention row (champion, champion, 0) at the end");
    }
    const ObjectId champ = last.winner;
    if (champ >= m) {
        throw Error(ErrorCode::structural, "champion id out of range");
    }

    std::vector<bool> eliminated(m, false);
    for (std::size_t r = 0; r + 1 < m; ++r) {
        const auto& row = rows[r];
        const std::string where = "row " + std::to_string(r + 1);
        if (row.winner >= m || row.loser >= m) {
            throw Error(ErrorCode::structural, where + ": object id out of range");
        }
        if (row.winner == row.loser) {
            throw Error(ErrorCode::structural, where + ": object plays against itself");
        }
        if (row.units < 0) {
            throw Error(ErrorCode::structural, where + ": negative units");
        }
        if (row.loser == champ) {
            throw Error(ErrorCode::structural, where + ": champion recorded as a loser");
        }
        if (eliminated[row.loser]) {
            throw Error(ErrorCode::structural, where + ": repeated loser");
        }
        if (eliminated[row.winner]) {
            throw Error(ErrorCode::structural, where + ": eliminated object plays again");
        }
        eliminated[row.loser] = true;
    }
    // m-1 distinct losers, none of them the champion: every other id lost once.
}

// ---------------------------------------------------------------------------
// PreferenceMatrix

PreferenceMatrix PreferenceMatrix::zero(std::size_t m) {
    PreferenceMatrix out;
    out.m_ = m;
    out.entries_.assign(m * m, 0);
    return out;
}

PreferenceMatrix PreferenceMatrix::from_rows(const std::vector<std::vector<Units>>& rows) {
    auto out = zero(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) {
            throw Error(ErrorCode::structural,
                        "matrix is not square: row " + std::to_string(i + 1) + " has " +
                            std::to_string(rows[i].size()) + " entries, expected " +
                            std::to_string(rows.size()));
        }
        for (std::size_t j = 0; j < rows.size(); ++j) {
            out.at(i, j) = rows[i][j];
        }
    }
    return out;
}

std::vector<std::vector<Units>> PreferenceMatrix::rows() const {
    std::vector<std::vector<Units>> out(m_, std::vector<Units>(m_));
    for (std::size_t i = 0; i < m_; ++i) {
        for (std::size_t j = 0; j < m_; ++j) {
            out[i][j] = at(i, j);
        }
    }
    return out;
}

Units add_units(Units a, Units b) {
    Units sum = 0;
    if (__builtin_add_overflow(a, b, &sum)) {
        throw Error(ErrorCode::invalid_argument, "unit arithmetic overflow");
    }
    return sum;
}

bool check_reciprocity(const PreferenceMatrix& matrix) {
    const auto m = matrix.size();
    for (ObjectId i = 0; i < m; ++i) {
        for (ObjectId j = i; j < m; ++j) {
            Units sum = 0;
            if (__builtin_add_overflow(matrix.at(i, j), matrix.at(j, i), &sum) || sum != 0) {
                return false;
            }
        }
    }
    return true;
}

ConsistencyReport check_consistency(const PreferenceMatrix& matrix) {
    ConsistencyReport report;
    report.reciprocal = check_reciprocity(matrix);
    if (!report.reciprocal) {
        return report;
    }
    const auto m = matrix.size();
    for (ObjectId i = 0; i < m; ++i) {
        for (ObjectId j = 0; j < m; ++j) {
            for (ObjectId k = 0; k < m; ++k) {
                const Units residual =
                    add_units(add_units(matrix.at(i, k), matrix.at(k, j)), -matrix.at(i, j));
                if (residual != 0) {
                    report.violations.push_back({i, j, k, residual});
                }
            }
        }
    }
    report.consistent = report.violations.empty();
    return report;
}

// ---------------------------------------------------------------------------
// Interchange

std::string to_csv(const PreferenceMatrix& matrix) {
    std::ostringstream out;
    for (ObjectId i = 0; i < matrix.size(); ++i) {
        for (ObjectId j = 0; j < matrix.size(); ++j) {
            if (j > 0) {
                out << ',';
            }
            out << matrix.at(i, j);
        }
        out << '\n';
    }
    return out.str();
}

PreferenceMatrix preference_matrix_from_csv(std::string_view text, std::string_view source) {
    std::vector<std::vector<Units>> rows;
    std::size_t last_line = 0;
    for (const auto& [number, line] : detail::lines(text)) {
        std::vector<Units> row;
        const auto fields = detail::split(line, ',');
        for (std::size_t f = 0; f < fields.size(); ++f) {
            const auto value = detail::parse_int(fields[f]);
            if (!value) {
                throw Error(ErrorCode::parse,
                            detail::location(source, number) + ": field " +
                                std::to_string(f + 1) + " is not an integer: '" +
                                std::string(fields[f]) + "'",
                            detail::location(source, number));
            }
            row.push_back(*value);
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw Error(ErrorCode::parse,
                        detail::location(source, number) + ": expected " +
                            std::to_string(rows.front().size()) + " fields, found " +
                            std::to_string(row.size()),
                        detail::location(source, number));
        }
        rows.push_back(std::move(row));
        last_line = number;
    }
    if (rows.empty()) {
        throw Error(ErrorCode::parse, std::string(source) + ": no matrix rows");
    }
    if (rows.size() != rows.front().size()) {
        throw Error(ErrorCode::structural,
                    detail::location(source, last_line) + ": matrix is not square (" +
                        std::to_string(rows.size()) + " rows of " +
                        std::to_string(rows.front().size()) + " entries)",
                    detail::location(source, last_line));
    }
    return PreferenceMatrix::from_rows(rows);
}

nlohmann::json to_json(const PreferenceMatrix& matrix) {
    return {{"m", matrix.size()}, {"entries", matrix.rows()}};
}

PreferenceMatrix preference_matrix_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("m") || !doc.contains("entries")) {
        throw Error(ErrorCode::schema, "matrix document needs 'm' and 'entries'", "/");
    }
    if (!doc["m"].is_number_unsigned()) {
        throw Error(ErrorCode::schema, "'m' must be a non-negative integer", "/m");
    }
    const auto& entries = doc["entries"];
    if (!entries.is_array()) {
        throw Error(ErrorCode::schema, "'entries' must be an array", "/entries");
    }
    std::vector<std::vector<Units>> rows;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!entries[i].is_array()) {
            throw Error(ErrorCode::schema, "row must be an array",
                        "/entries/" + std::to_string(i));
        }
        std::vector<Units> row;
        for (std::size_t j = 0; j < entries[i].size(); ++j) {
            if (!entries[i][j].is_number_integer()) {
                throw Error(ErrorCode::schema, "entry must be an integer",
                            "/entries/" + std::to_string(i) + "/" + std::to_string(j));
            }
            row.push_back(entries[i][j].get<Units>());
        }
        rows.push_back(std::move(row));
    }
    if (rows.size() != doc["m"].get<std::size_t>()) {
        throw Error(ErrorCode::structural, "'m' does not match the number of rows", "/m");
    }
    return PreferenceMatrix::from_rows(rows);
}

} // namespace ttm
