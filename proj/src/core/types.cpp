#include "oss/core/types.hpp"

#include "oss/core/errors.hpp"

namespace oss
{

std::string to_string(SliceState s)
{
    return json(s).get<std::string>();
}

bool is_terminal(SliceState s)
{
    return s == SliceState::TERMINATED || s == SliceState::FAILED;
}

bool slice_transition_allowed(SliceState from, SliceState to)
{
    using S = SliceState;
    if (is_terminal(from))
        return false;
    if (to == S::FAILED)
        return true;
    switch (from)
    {
    case S::REQUESTED: return to == S::NEGOTIATING;
    case S::NEGOTIATING: return to == S::INSTANTIATING;
    case S::INSTANTIATING: return to == S::ACTIVE;
    case S::ACTIVE: return to == S::UPDATING || to == S::TERMINATING;
    case S::UPDATING: return to == S::ACTIVE;
    case S::TERMINATING: return to == S::TERMINATED;
    default: return false;
    }
}

void transition(SliceRecord& record, SliceState to, SimTime at)
{
    if (!slice_transition_allowed(record.state, to))
        fail(Errc::InvalidState, "slice " + record.slice_id + " cannot move " + to_string(record.state) + " -> " +
                                     to_string(to));
    record.state = to;
    if (to == SliceState::TERMINATED)
        record.bindings.clear();
    record.state_history.push_back({to_string(to), at});
}

} // namespace oss
