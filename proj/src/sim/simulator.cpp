#include "oss/sim/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <limits>

#include <fnmatch.h>

namespace oss::sim
{

namespace
{

constexpr const char* kSim = "sim";
constexpr const char* kClock = "clock";
constexpr const char* kLogHead = "log_head";
constexpr const char* kLog = "sim_log";

std::string log_id(std::uint64_t index)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%012llu", static_cast<unsigned long long>(index));
    return buf;
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

bool glob(const std::string& pattern, const std::string& text)
{
    return ::fnmatch(pattern.c_str(), text.c_str(), 0) == 0;
}

bool earlier(const ScheduledEvent& a, const ScheduledEvent& b)
{
    return a.fire_time < b.fire_time || (a.fire_time == b.fire_time && a.seq < b.seq);
}

std::int64_t wall_now_ms()
{
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

} // namespace

json log_entry_for_hash(const LogEntry& e)
{
    return {{"index", e.index},       {"sim_time", e.sim_time},     {"actor", e.actor},
            {"subject", e.subject},   {"transition", e.transition}, {"detail", e.detail}};
}

Simulator::Simulator(DocumentStore& store, SimConfig config) : store_(store), config_(config)
{
    if (auto existing = load<ClockState>(store_, kSim, kClock))
    {
        config_ = existing->config;
        return;
    }
    ClockState fresh;
    fresh.config = config_;
    fresh.faults.seed = config_.seed;
    try
    {
        insert(store_, kSim, kClock, fresh);
    }
    catch (const Error& e)
    {
        if (e.code() != Errc::RevisionConflict)
            throw;
        config_ = require<ClockState>(store_, kSim, kClock, Errc::UnknownDocument).config;
    }
}

SimTime Simulator::now() const
{
    return require<ClockState>(store_, kSim, kClock, Errc::UnknownDocument).now;
}

SimConfig Simulator::config() const { return config_; }

void Simulator::on(const std::string& kind, Handler handler) { handlers_[kind] = std::move(handler); }

double Simulator::jitter(std::uint64_t seq) const
{
    if (config_.jitter_max <= 0)
        return 0;
    auto r = splitmix64(config_.seed ^ splitmix64(seq));
    return static_cast<double>(r % static_cast<std::uint64_t>(config_.jitter_max + 1));
}

SimTime Simulator::schedule(double delay, std::string kind, std::string subject, json payload)
{
    if (delay < 0)
        delay = 0;
    SimTime fire = 0;
    update<ClockState>(store_, kSim, kClock, [&](ClockState& c) {
        std::uint64_t seq = c.next_seq++;
        fire = c.now + delay + jitter(seq);
        c.pending.push_back({fire, seq, kind, subject, payload});
    });
    return fire;
}

std::optional<ScheduledEvent> Simulator::pop_due(SimTime target)
{
    std::optional<ScheduledEvent> due;
    update<ClockState>(store_, kSim, kClock, [&](ClockState& c) {
        due.reset();
        auto it = std::min_element(c.pending.begin(), c.pending.end(), earlier);
        if (it != c.pending.end() && it->fire_time <= target)
        {
            due = *it;
            c.pending.erase(it);
            c.now = std::max(c.now, due->fire_time);
        }
        else
        {
            c.now = std::max(c.now, target);
        }
    });
    return due;
}

void Simulator::dispatch(const ScheduledEvent& event)
{
    auto it = handlers_.find(event.kind);
    if (it == handlers_.end())
    {
        log("sim", event.subject, "unhandled", {{"kind", event.kind}});
        return;
    }
    try
    {
        it->second(event);
    }
    catch (const std::exception& e)
    {
        log("sim", event.subject, "handler.error", {{"kind", event.kind}, {"what", e.what()}});
    }
}

std::vector<LogEntry> Simulator::advance(double dt)
{
    if (dt < 0)
        fail(Errc::BadRequest, "advance requires dt >= 0");
    std::lock_guard lock(advance_mutex_);
    auto before = log_size();
    SimTime target = now() + dt;
    while (auto event = pop_due(target))
        dispatch(*event);
    return events_after(before);
}

std::vector<LogEntry> Simulator::settle(double limit)
{
    std::lock_guard lock(advance_mutex_);
    auto before = log_size();
    SimTime start = now();
    for (;;)
    {
        auto queue = pending();
        if (queue.empty())
            break;
        auto next = std::min_element(queue.begin(), queue.end(), earlier);
        if (next->fire_time - start > limit)
            break;
        advance(std::max(0.0, next->fire_time - now()));
    }
    return events_after(before);
}

bool Simulator::idle() const { return pending().empty(); }

std::vector<ScheduledEvent> Simulator::pending() const
{
    auto c = require<ClockState>(store_, kSim, kClock, Errc::UnknownDocument);
    std::sort(c.pending.begin(), c.pending.end(), earlier);
    return c.pending;
}

// ---------------------------------------------------------------------------

LogEntry Simulator::log(std::string actor, std::string subject, std::string transition, json detail)
{
    LogEntry entry{0, now(), std::move(actor), std::move(subject), std::move(transition), std::move(detail),
                   wall_now_ms()};
    for (int attempt = 0; attempt < 1000; ++attempt)
    {
        auto head = store_.get(kSim, kLogHead);
        std::uint64_t count = head ? head->body.get<std::uint64_t>() : 0;
        Revision head_rev = head ? head->revision : 0;
        std::uint64_t slot = count + 1;

        if (!store_.get(kLog, log_id(slot)))
        {
            entry.index = slot;
            try
            {
                store_.commit(kLog, log_id(slot), json(entry), 0);
            }
            catch (const Error& e)
            {
                if (e.code() != Errc::RevisionConflict)
                    throw;
                continue;
            }
            try
            {
                store_.commit(kSim, kLogHead, slot, head_rev);
            }
            catch (const Error& e)
            {
                // another writer already advanced the head past our slot
                if (e.code() != Errc::RevisionConflict && e.code() != Errc::UnknownDocument)
                    throw;
            }
            return entry;
        }
        // slot filled but head lagging: help advance it
        try
        {
            store_.commit(kSim, kLogHead, slot, head_rev);
        }
        catch (const Error& e)
        {
            if (e.code() != Errc::RevisionConflict && e.code() != Errc::UnknownDocument)
                throw;
        }
    }
    fail(Errc::CasExhausted, "event log append kept conflicting");
}

std::uint64_t Simulator::log_size() const
{
    auto head = store_.get(kSim, kLogHead);
    return head ? head->body.get<std::uint64_t>() : 0;
}

std::vector<LogEntry> Simulator::events_after(std::uint64_t cursor, std::size_t limit) const
{
    std::vector<LogEntry> out;
    auto size = log_size();
    for (auto i = cursor + 1; i <= size && out.size() < limit; ++i)
        out.push_back(require<LogEntry>(store_, kLog, log_id(i), Errc::UnknownDocument));
    return out;
}

std::string Simulator::log_hash() const
{
    std::string blob;
    for (const auto& e : events_after(0))
    {
        blob += canonical(log_entry_for_hash(e));
        blob += '\n';
    }
    return sha256_hex(blob);
}

// ---------------------------------------------------------------------------

void Simulator::inject(FaultProfile profile)
{
    update<ClockState>(store_, kSim, kClock, [&](ClockState& c) { c.faults = profile; });
    log("sim", "faults", "faults.injected", json(profile));
}

FaultProfile Simulator::faults() const
{
    return require<ClockState>(store_, kSim, kClock, Errc::UnknownDocument).faults;
}

FaultDecision Simulator::check(const std::string& transition, const std::vector<std::string>& subjects)
{
    // Cheap read first; only write when a bounded rule is consumed.
    auto current = faults();
    if (current.faults.empty())
        return {};

    FaultDecision decision;
    bool consumed = false;
    auto evaluate = [&](FaultProfile& profile) {
        decision = {};
        consumed = false;
        for (auto& rule : profile.faults)
        {
            if (rule.times == 0 || !glob(rule.transition, transition))
                continue;
            bool hit = std::any_of(subjects.begin(), subjects.end(),
                                   [&](const std::string& s) { return glob(rule.subject, s); });
            if (!hit)
                continue;
            switch (rule.effect)
            {
            case FaultEffect::fail: decision.fail = true; break;
            case FaultEffect::unreachable: decision.unreachable = true; break;
            case FaultEffect::delay: decision.extra_delay += rule.extra; break;
            }
            if (rule.times > 0)
            {
                --rule.times;
                consumed = true;
            }
        }
    };

    evaluate(current);
    if (!consumed)
        return decision;

    update<ClockState>(store_, kSim, kClock, [&](ClockState& c) { evaluate(c.faults); });
    return decision;
}

} // namespace oss::sim
