/// @file session_store.cpp

#include "ttm/session_store.hpp"

#include <fstream>
#include <sstream>

#include "ttm/error.hpp"

namespace ttm {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::io, "cannot read '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorCode::io, "cannot write '" + tmp.string() + "'");
        }
        out << contents;
        if (!out.flush()) {
            throw Error(ErrorCode::io, "short write to '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        throw Error(ErrorCode::io, "cannot replace '" + path.string() + "': " + ec.message());
    }
}

// ---------------------------------------------------------------------------

std::mutex& SessionStore::lock_for(const std::string& id) {
    std::lock_guard guard(locks_guard_);
    auto& slot = locks_[id];
    if (!slot) {
        slot = std::make_unique<std::mutex>();
    }
    return *slot;
}

Session SessionStore::save_locked(const Session& session) {
    const auto current = stored_version(session.id).value_or(0);
    if (current != session.version) {
        throw Error(ErrorCode::version_conflict,
                    "session " + session.id + " is at version " + std::to_string(current) +
                        ", write was based on version " + std::to_string(session.version) +
                        "; reload and retry",
                    "version");
    }
    Session stored = session;
    ++stored.version;
    write(stored);
    return stored;
}

Session SessionStore::save(const Session& session) {
    std::lock_guard guard(lock_for(session.id));
    return save_locked(session);
}

Session SessionStore::update(const std::string& id,
                             const std::function<Session(const Session&)>& mutate) {
    std::lock_guard guard(lock_for(id));
    auto current = load(id);
    if (!current) {
        throw Error(ErrorCode::not_found, "no session '" + id + "'", "session_id");
    }
    return save_locked(mutate(*current));
}

// ---------------------------------------------------------------------------

FileSessionStore::FileSessionStore(fs::path directory) : directory_(std::move(directory)) {
    std::error_code ec;
    fs::create_directories(directory_, ec);
    if (ec) {
        throw Error(ErrorCode::io,
                    "cannot create data directory '" + directory_.string() + "': " + ec.message());
    }
}

fs::path FileSessionStore::path_for(const std::string& id) const {
    for (const char c : id) {
        const bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        c == '-' || c == '_';
        if (!ok) {
            throw Error(ErrorCode::not_found, "invalid session id", "session_id");
        }
    }
    return directory_ / ("session-" + id + ".json");
}

std::optional<Session> FileSessionStore::load(const std::string& id) const {
    const auto path = path_for(id);
    if (!fs::exists(path)) {
        return std::nullopt;
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::parse, path.string() + ": " + e.what());
    }
    return load_session(doc);
}

std::optional<std::uint64_t> FileSessionStore::stored_version(const std::string& id) const {
    if (auto s = load(id)) {
        return s->version;
    }
    return std::nullopt;
}

void FileSessionStore::write(const Session& session) {
    write_file_atomic(path_for(session.id), canonical_dump(save_session(session)));
}

// ---------------------------------------------------------------------------

std::optional<Session> MemorySessionStore::load(const std::string& id) const {
    std::lock_guard guard(guard_);
    const auto it = documents_.find(id);
    if (it == documents_.end()) {
        return std::nullopt;
    }
    return load_session(nlohmann::json::parse(it->second));
}

std::optional<std::uint64_t> MemorySessionStore::stored_version(const std::string& id) const {
    if (auto s = load(id)) {
        return s->version;
    }
    return std::nullopt;
}

void MemorySessionStore::write(const Session& session) {
    auto doc = canonical_dump(save_session(session));
    std::lock_guard guard(guard_);
    documents_[session.id] = std::move(doc);
}

} // namespace ttm
