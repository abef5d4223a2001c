/// @file session_store.hpp
/// @brief Versioned session persistence.
///
/// Writes for one session id are serialized; a write only succeeds when the
/// caller's session.version equals the stored version, after which the stored
/// version is incremented. Reads do not take the write lock.

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "ttm/session.hpp"

namespace ttm {

class SessionStore {
public:
    virtual ~SessionStore() = default;

    virtual std::optional<Session> load(const std::string& id) const = 0;

    /// Version-checked write; returns the stored copy (version + 1).
    /// Throws version_conflict when the stored version moved on.
    Session save(const Session& session);

    /// Serialized read-modify-write. Throws not_found for unknown ids.
    Session update(const std::string& id, const std::function<Session(const Session&)>& mutate);

protected:
    /// Stored version, or nullopt for an unknown id. Called with the id lock held.
    virtual std::optional<std::uint64_t> stored_version(const std::string& id) const = 0;
    /// Unconditional write. Called with the id lock held.
    virtual void write(const Session& session) = 0;

private:
    std::mutex& lock_for(const std::string& id);
    Session save_locked(const Session& session);

    std::mutex locks_guard_;
    std::map<std::string, std::unique_ptr<std::mutex>, std::less<>> locks_;
};

/// One `session-<id>.json` file per session in a single directory.
class FileSessionStore final : public SessionStore {
public:
    /// Creates the directory if needed.
    explicit FileSessionStore(std::filesystem::path directory);

    std::optional<Session> load(const std::string& id) const override;
    std::filesystem::path path_for(const std::string& id) const;

protected:
    std::optional<std::uint64_t> stored_version(const std::string& id) const override;
    void write(const Session& session) override;

private:
    std::filesystem::path directory_;
};

class MemorySessionStore final : public SessionStore {
public:
    std::optional<Session> load(const std::string& id) const override;

protected:
    std::optional<std::uint64_t> stored_version(const std::string& id) const override;
    void write(const Session& session) override;

private:
    mutable std::mutex guard_;
    std::map<std::string, std::string, std::less<>> documents_;
};

/// Reads a whole file; throws io.
std::string read_file(const std::filesystem::path& path);
/// Writes through a temporary file and rename; throws io.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

} // namespace ttm
