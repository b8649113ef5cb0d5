#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "json.hpp"

namespace oss
{

using Revision = std::uint64_t;

struct RevisionedDocument
{
    std::string collection;
    std::string doc_id;
    Revision revision = 0;
    json body;
};

/// Compare-and-swap document store. Revision 0 means "absent"; every
/// successful write bumps the revision by exactly one.
class DocumentStore
{
public:
    virtual ~DocumentStore() = default;

    virtual std::optional<RevisionedDocument> get(std::string_view collection, std::string_view id) const = 0;

    /// Writes `body` iff the stored revision equals `expected_revision`.
    /// Throws RevisionConflict on mismatch (store unchanged) and
    /// UnknownDocument when updating (expected > 0) an absent id.
    virtual Revision commit(std::string_view collection, std::string_view id, const json& body,
                            Revision expected_revision) = 0;

    /// All documents of a collection ordered by id.
    virtual std::vector<RevisionedDocument> list(std::string_view collection) const = 0;

    virtual std::vector<std::string> collections() const = 0;
};

Revision commit_with_revision(DocumentStore& store, const RevisionedDocument& doc, Revision expected_revision);

class MemoryStore final : public DocumentStore
{
public:
    std::optional<RevisionedDocument> get(std::string_view collection, std::string_view id) const override;
    Revision commit(std::string_view collection, std::string_view id, const json& body,
                    Revision expected_revision) override;
    std::vector<RevisionedDocument> list(std::string_view collection) const override;
    std::vector<std::string> collections() const override;

private:
    mutable std::mutex mutex_;
    std::map<std::string, std::map<std::string, RevisionedDocument>, std::less<>> data_;
};

/// Embedded file-backed store: one directory per collection, one canonical
/// JSON file per document. Commits are serialized across processes with an
/// advisory lock on <root>/.lock and published by atomic rename.
class FileStore final : public DocumentStore
{
public:
    explicit FileStore(std::filesystem::path root);
    ~FileStore() override;

    FileStore(const FileStore&) = delete;
    FileStore& operator=(const FileStore&) = delete;

    std::optional<RevisionedDocument> get(std::string_view collection, std::string_view id) const override;
    Revision commit(std::string_view collection, std::string_view id, const json& body,
                    Revision expected_revision) override;
    std::vector<RevisionedDocument> list(std::string_view collection) const override;
    std::vector<std::string> collections() const override;

    const std::filesystem::path& root() const { return root_; }

private:
    std::filesystem::path path_for(std::string_view collection, std::string_view id) const;

    std::filesystem::path root_;
    int lock_fd_ = -1;
    mutable std::mutex mutex_;
};

/// Content hash of every document, keyed "collection/id". Used to prove that
/// a restart leaves durable state untouched.
std::map<std::string, std::string> snapshot_hashes(const DocumentStore& store);

// ---------------------------------------------------------------------------
// Typed access helpers. T must be convertible to/from json.

inline constexpr int kCasRetries = 5;

template <typename T>
std::optional<T> load(const DocumentStore& store, std::string_view collection, std::string_view id)
{
    auto doc = store.get(collection, id);
    if (!doc)
        return std::nullopt;
    return doc->body.get<T>();
}

template <typename T>
T require(const DocumentStore& store, std::string_view collection, std::string_view id, Errc missing)
{
    auto doc = store.get(collection, id);
    if (!doc)
        fail(missing, std::string(collection) + "/" + std::string(id) + " not found");
    return doc->body.get<T>();
}

template <typename T>
void insert(DocumentStore& store, std::string_view collection, std::string_view id, const T& value)
{
    store.commit(collection, id, json(value), 0);
}

template <typename T>
std::vector<T> load_all(const DocumentStore& store, std::string_view collection)
{
    std::vector<T> out;
    for (auto& doc : store.list(collection))
        out.push_back(doc.body.get<T>());
    return out;
}

/// Read-modify-write with CAS. `fn(T&)` may throw to abort; RevisionConflict
/// is retried on a fresh read up to kCasRetries times, then CasExhausted.
template <typename T, typename Fn>
T update(DocumentStore& store, std::string_view collection, std::string_view id, Fn&& fn,
         Errc missing = Errc::UnknownDocument)
{
    for (int attempt = 0; attempt < kCasRetries; ++attempt)
    {
        auto doc = store.get(collection, id);
        if (!doc)
            fail(missing, std::string(collection) + "/" + std::string(id) + " not found");
        T value = doc->body.get<T>();
        fn(value);
        try
        {
            store.commit(collection, id, json(value), doc->revision);
            return value;
        }
        catch (const Error& e)
        {
            if (e.code() != Errc::RevisionConflict)
                throw;
        }
    }
    fail(Errc::CasExhausted, std::string(collection) + "/" + std::string(id) + " kept changing");
}

/// Monotonic per-prefix counter; returns "<prefix>-<n>".
std::string next_id(DocumentStore& store, std::string_view prefix);

/// Orders ids with embedded numbers numerically: "vim-2" before "vim-10".
bool natural_less(std::string_view a, std::string_view b);

} // namespace oss
