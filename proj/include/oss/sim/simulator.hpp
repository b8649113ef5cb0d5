#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "oss/core/json.hpp"
#include "oss/core/store.hpp"
#include "oss/core/types.hpp"

namespace oss::sim
{

/// Default operation durations in sim-seconds. The only place these constants
/// live; tests read them from here instead of repeating the numbers.
struct Durations
{
    double commission = 60;
    double os_deploy = 120;
    double release = 30;
    double playbook_step = 30;
    double ns_instantiate = 30;
    double ns_terminate = 10;
    double ns_scale = 30;
    double config_apply = 5;
};

struct SimConfig
{
    std::uint64_t seed = 0;
    Durations durations;
    /// Each scheduled delay gets a seed-derived integer jitter in [0, jitter_max].
    int jitter_max = 0;
};

struct ScheduledEvent
{
    SimTime fire_time = 0;
    std::uint64_t seq = 0;
    std::string kind;
    std::string subject;
    json payload;
};

/// One line of the append-only simulation log. `wall_ms` is informational and
/// excluded from the determinism hash.
struct LogEntry
{
    std::uint64_t index = 0;
    SimTime sim_time = 0;
    std::string actor;
    std::string subject;
    std::string transition;
    json detail;
    std::int64_t wall_ms = 0;
};

enum class FaultEffect
{
    fail,
    delay,
    unreachable
};

/// Scripted fault. `subject` and `transition` are shell-style globs matched
/// against the transition name and every alias of the subject.
struct FaultRule
{
    std::string subject = "*";
    std::string transition = "*";
    FaultEffect effect = FaultEffect::fail;
    double extra = 0;
    /// Remaining number of matches; negative means unlimited.
    int times = -1;
};

struct FaultProfile
{
    std::uint64_t seed = 0;
    std::vector<FaultRule> faults;
};

struct FaultDecision
{
    bool fail = false;
    bool unreachable = false;
    double extra_delay = 0;

    bool failed() const { return fail || unreachable; }
};

struct ClockState
{
    SimTime now = 0;
    std::uint64_t next_seq = 1;
    std::vector<ScheduledEvent> pending;
    FaultProfile faults;
    SimConfig config;
};

/// Discrete-event engine whose entire state (clock, pending queue, fault
/// profile, log) lives in the document store, so a restarted process resumes
/// exactly where the previous one stopped. Handlers are code and must be
/// registered again after a restart.
class Simulator
{
public:
    using Handler = std::function<void(const ScheduledEvent&)>;

    /// Uses the persisted configuration when the store already holds a clock;
    /// `config` only seeds a fresh store.
    Simulator(DocumentStore& store, SimConfig config = {});

    SimTime now() const;
    SimConfig config() const;
    const Durations& durations() const { return config_.durations; }

    void on(const std::string& kind, Handler handler);

    /// Schedules an event `delay` sim-seconds from now (plus seeded jitter).
    /// Returns the absolute fire time.
    SimTime schedule(double delay, std::string kind, std::string subject, json payload = json::object());

    /// Fires every event due within [now, now+dt] in (fire_time, seq) order,
    /// including events scheduled by handlers while firing. Returns the log
    /// entries appended meanwhile.
    std::vector<LogEntry> advance(double dt);

    /// Advances until the pending queue is empty or `limit` sim-seconds passed.
    std::vector<LogEntry> settle(double limit = 1e7);

    bool idle() const;
    std::vector<ScheduledEvent> pending() const;

    // Log ---------------------------------------------------------------------

    LogEntry log(std::string actor, std::string subject, std::string transition, json detail = json::object());
    std::uint64_t log_size() const;
    /// Entries with index > cursor (1-based indices), at most `limit`.
    std::vector<LogEntry> events_after(std::uint64_t cursor, std::size_t limit = SIZE_MAX) const;
    /// SHA-256 over the canonical JSON of every entry without wall time.
    std::string log_hash() const;

    // Faults ------------------------------------------------------------------

    void inject(FaultProfile profile);
    FaultProfile faults() const;
    /// Evaluates the profile for a transition; consumes bounded rules.
    FaultDecision check(const std::string& transition, const std::vector<std::string>& subjects);

    DocumentStore& store() { return store_; }

private:
    double jitter(std::uint64_t seq) const;
    std::optional<ScheduledEvent> pop_due(SimTime target);
    void dispatch(const ScheduledEvent& event);

    DocumentStore& store_;
    SimConfig config_;
    std::map<std::string, Handler> handlers_;
    std::recursive_mutex advance_mutex_;
};

json log_entry_for_hash(const LogEntry& e);

NLOHMANN_JSON_SERIALIZE_ENUM(FaultEffect, {{FaultEffect::fail, "fail"},
                                           {FaultEffect::delay, "delay"},
                                           {FaultEffect::unreachable, "unreachable"}})
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Durations, commission, os_deploy, release, playbook_step,
                                                ns_instantiate, ns_terminate, ns_scale, config_apply)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SimConfig, seed, durations, jitter_max)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ScheduledEvent, fire_time, seq, kind, subject, payload)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(LogEntry, index, sim_time, actor, subject, transition, detail,
                                                wall_ms)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(FaultRule, subject, transition, effect, extra, times)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(FaultProfile, seed, faults)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ClockState, now, next_seq, pending, faults, config)

} // namespace oss::sim
