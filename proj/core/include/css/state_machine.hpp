#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace css {

/// The 17 states of the PackML-style skill profile.
enum class State {
  Stopped,
  Starting,
  Idle,
  Suspended,
  Execute,
  Stopping,
  Aborting,
  Aborted,
  Holding,
  Held,
  Unholding,
  Suspending,
  Unsuspending,
  Resetting,
  Completing,
  Complete,
  Clearing,
};

enum class Command { Reset, Start, Stop, Hold, Unhold, Suspend, Unsuspend, Abort, Clear };

inline constexpr std::array<State, 17> kAllStates{
    State::Stopped,   State::Starting,   State::Idle,         State::Suspended, State::Execute,
    State::Stopping,  State::Aborting,   State::Aborted,      State::Holding,   State::Held,
    State::Unholding, State::Suspending, State::Unsuspending, State::Resetting, State::Completing,
    State::Complete,  State::Clearing};

inline constexpr std::array<Command, 9> kAllCommands{
    Command::Reset, Command::Start,     Command::Stop,  Command::Hold, Command::Unhold,
    Command::Suspend, Command::Unsuspend, Command::Abort, Command::Clear};

std::string_view to_string(State state);
std::string_view to_string(Command command);
std::optional<State> parse_state(std::string_view text);
std::optional<Command> parse_command(std::string_view text);

/// Target of a client command, or nullopt when the pair is not in the table.
std::optional<State> next_state(State state, Command command);

/// Target reached when an acting state completes ("SC"); nullopt for wait states.
std::optional<State> completion_target(State state);

/// Acting states run work and advance on their own.
inline bool is_acting(State state) { return completion_target(state).has_value(); }

}  // namespace css
