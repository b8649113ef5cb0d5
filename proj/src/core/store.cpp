#include "oss/core/store.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

namespace oss
{

namespace fs = std::filesystem;

Revision commit_with_revision(DocumentStore& store, const RevisionedDocument& doc, Revision expected_revision)
{
    return store.commit(doc.collection, doc.doc_id, doc.body, expected_revision);
}

namespace
{

[[noreturn]] void conflict(std::string_view collection, std::string_view id, Revision expected, Revision stored)
{
    fail(Errc::RevisionConflict,
         std::string(collection) + "/" + std::string(id) + " expected revision " + std::to_string(expected) +
             " but stored " + std::to_string(stored),
         {{"expected", expected}, {"stored", stored}});
}

void check_revision(std::string_view collection, std::string_view id, Revision expected, Revision stored)
{
    if (expected == stored)
        return;
    if (stored == 0)
        fail(Errc::UnknownDocument, std::string(collection) + "/" + std::string(id) + " does not exist");
    conflict(collection, id, expected, stored);
}

std::string encode_name(std::string_view id)
{
    static constexpr char hex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : id)
    {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.')
        {
            out.push_back(static_cast<char>(c));
        }
        else
        {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xf]);
        }
    }
    return out;
}

std::string decode_name(std::string_view name)
{
    std::string out;
    for (std::size_t i = 0; i < name.size(); ++i)
    {
        if (name[i] == '%' && i + 2 < name.size())
        {
            out.push_back(static_cast<char>(std::stoi(std::string(name.substr(i + 1, 2)), nullptr, 16)));
            i += 2;
        }
        else
        {
            out.push_back(name[i]);
        }
    }
    return out;
}

std::optional<json> read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return std::nullopt;
    std::stringstream buf;
    buf << in.rdbuf();
    return json::parse(buf.str());
}

class FileLock
{
public:
    explicit FileLock(int fd) : fd_(fd) { ::flock(fd_, LOCK_EX); }
    ~FileLock() { ::flock(fd_, LOCK_UN); }
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

private:
    int fd_;
};

} // namespace

// ---------------------------------------------------------------------------

std::optional<RevisionedDocument> MemoryStore::get(std::string_view collection, std::string_view id) const
{
    std::lock_guard lock(mutex_);
    auto c = data_.find(collection);
    if (c == data_.end())
        return std::nullopt;
    auto d = c->second.find(std::string(id));
    if (d == c->second.end())
        return std::nullopt;
    return d->second;
}

Revision MemoryStore::commit(std::string_view collection, std::string_view id, const json& body,
                             Revision expected_revision)
{
    std::lock_guard lock(mutex_);
    auto& docs = data_[std::string(collection)];
    auto it = docs.find(std::string(id));
    Revision stored = it == docs.end() ? 0 : it->second.revision;
    check_revision(collection, id, expected_revision, stored);
    auto& doc = docs[std::string(id)];
    doc = RevisionedDocument{std::string(collection), std::string(id), stored + 1, body};
    return doc.revision;
}

std::vector<RevisionedDocument> MemoryStore::list(std::string_view collection) const
{
    std::lock_guard lock(mutex_);
    std::vector<RevisionedDocument> out;
    auto c = data_.find(collection);
    if (c == data_.end())
        return out;
    for (const auto& [_, doc] : c->second)
        out.push_back(doc);
    return out;
}

std::vector<std::string> MemoryStore::collections() const
{
    std::lock_guard lock(mutex_);
    std::vector<std::string> out;
    for (const auto& [name, docs] : data_)
        if (!docs.empty())
            out.push_back(name);
    return out;
}

// ---------------------------------------------------------------------------

FileStore::FileStore(fs::path root) : root_(std::move(root))
{
    fs::create_directories(root_);
    lock_fd_ = ::open((root_ / ".lock").c_str(), O_RDWR | O_CREAT, 0644);
    if (lock_fd_ < 0)
        throw std::runtime_error("cannot open store lock in " + root_.string());
}

FileStore::~FileStore()
{
    if (lock_fd_ >= 0)
        ::close(lock_fd_);
}

fs::path FileStore::path_for(std::string_view collection, std::string_view id) const
{
    return root_ / encode_name(collection) / (encode_name(id) + ".json");
}

std::optional<RevisionedDocument> FileStore::get(std::string_view collection, std::string_view id) const
{
    auto raw = read_file(path_for(collection, id));
    if (!raw)
        return std::nullopt;
    return RevisionedDocument{std::string(collection), std::string(id), raw->at("revision").get<Revision>(),
                              raw->at("body")};
}

Revision FileStore::commit(std::string_view collection, std::string_view id, const json& body,
                           Revision expected_revision)
{
    std::lock_guard guard(mutex_);
    FileLock lock(lock_fd_);

    auto path = path_for(collection, id);
    Revision stored = 0;
    if (auto raw = read_file(path))
        stored = raw->at("revision").get<Revision>();
    check_revision(collection, id, expected_revision, stored);

    fs::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << canonical(json{{"revision", stored + 1}, {"body", body}});
        if (!out)
            throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
    return stored + 1;
}

std::vector<RevisionedDocument> FileStore::list(std::string_view collection) const
{
    std::vector<RevisionedDocument> out;
    auto dir = root_ / encode_name(collection);
    if (!fs::exists(dir))
        return out;
    std::vector<std::string> ids;
    for (const auto& entry : fs::directory_iterator(dir))
    {
        if (entry.path().extension() != ".json")
            continue;
        ids.push_back(decode_name(entry.path().stem().string()));
    }
    std::sort(ids.begin(), ids.end());
    for (const auto& id : ids)
        if (auto doc = get(collection, id))
            out.push_back(std::move(*doc));
    return out;
}

std::vector<std::string> FileStore::collections() const
{
    std::vector<std::string> out;
    for (const auto& entry : fs::directory_iterator(root_))
        if (entry.is_directory())
            out.push_back(decode_name(entry.path().filename().string()));
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------

std::map<std::string, std::string> snapshot_hashes(const DocumentStore& store)
{
    std::map<std::string, std::string> out;
    for (const auto& collection : store.collections())
        for (const auto& doc : store.list(collection))
            out[collection + "/" + doc.doc_id] =
                content_hash(json{{"revision", doc.revision}, {"body", doc.body}});
    return out;
}

std::string next_id(DocumentStore& store, std::string_view prefix)
{
    for (int attempt = 0; attempt < kCasRetries * 4; ++attempt)
    {
        auto doc = store.get("counters", prefix);
        std::int64_t next = doc ? doc->body.get<std::int64_t>() + 1 : 1;
        try
        {
            store.commit("counters", prefix, next, doc ? doc->revision : 0);
            return std::string(prefix) + "-" + std::to_string(next);
        }
        catch (const Error& e)
        {
            if (e.code() != Errc::RevisionConflict)
                throw;
        }
    }
    fail(Errc::CasExhausted, "counter " + std::string(prefix) + " kept changing");
}

bool natural_less(std::string_view a, std::string_view b)
{
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size())
    {
        if (std::isdigit(static_cast<unsigned char>(a[i])) && std::isdigit(static_cast<unsigned char>(b[j])))
        {
            std::size_t ei = i;
            std::size_t ej = j;
            while (ei < a.size() && std::isdigit(static_cast<unsigned char>(a[ei])))
                ++ei;
            while (ej < b.size() && std::isdigit(static_cast<unsigned char>(b[ej])))
                ++ej;
            auto na = a.substr(i, ei - i);
            auto nb = b.substr(j, ej - j);
            while (na.size() > 1 && na[0] == '0')
                na.remove_prefix(1);
            while (nb.size() > 1 && nb[0] == '0')
                nb.remove_prefix(1);
            if (na.size() != nb.size())
                return na.size() < nb.size();
            if (na != nb)
                return na < nb;
            i = ei;
            j = ej;
            continue;
        }
        if (a[i] != b[j])
            return a[i] < b[j];
        ++i;
        ++j;
    }
    return a.size() - i < b.size() - j;
}

} // namespace oss
