#include "css/state_machine.hpp"

namespace css {

std::string_view to_string(State state) {
  switch (state) {
    case State::Stopped: return "Stopped";
    case State::Starting: return "Starting";
    case State::Idle: return "Idle";
    case State::Suspended: return "Suspended";
    case State::Execute: return "Execute";
    case State::Stopping: return "Stopping";
    case State::Aborting: return "Aborting";
    case State::Aborted: return "Aborted";
    case State::Holding: return "Holding";
    case State::Held: return "Held";
    case State::Unholding: return "Unholding";
    case State::Suspending: return "Suspending";
    case State::Unsuspending: return "Unsuspending";
    case State::Resetting: return "Resetting";
    case State::Completing: return "Completing";
    case State::Complete: return "Complete";
    case State::Clearing: return "Clearing";
  }
  return "?";
}

std::string_view to_string(Command command) {
  switch (command) {
    case Command::Reset: return "Reset";
    case Command::Start: return "Start";
    case Command::Stop: return "Stop";
    case Command::Hold: return "Hold";
    case Command::Unhold: return "Unhold";
    case Command::Suspend: return "Suspend";
    case Command::Unsuspend: return "Unsuspend";
    case Command::Abort: return "Abort";
    case Command::Clear: return "Clear";
  }
  return "?";
}

std::optional<State> parse_state(std::string_view text) {
  for (State s : kAllStates) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

std::optional<Command> parse_command(std::string_view text) {
  for (Command c : kAllCommands) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

std::optional<State> next_state(State state, Command command) {
  switch (command) {
    case Command::Start:
      if (state == State::Idle) return State::Starting;
      break;
    case Command::Reset:
      if (state == State::Complete || state == State::Stopped) return State::Resetting;
      break;
    case Command::Hold:
      if (state == State::Execute) return State::Holding;
      break;
    case Command::Unhold:
      if (state == State::Held) return State::Unholding;
      break;
    case Command::Suspend:
      if (state == State::Execute) return State::Suspending;
      break;
    case Command::Unsuspend:
      if (state == State::Suspended) return State::Unsuspending;
      break;
    case Command::Stop:
      switch (state) {
        case State::Stopped:
        case State::Stopping:
        case State::Aborting:
        case State::Aborted:
        case State::Clearing: break;
        default: return State::Stopping;
      }
      break;
    case Command::Abort:
      if (state != State::Aborting && state != State::Aborted) return State::Aborting;
      break;
    case Command::Clear:
      if (state == State::Aborted) return State::Clearing;
      break;
  }
  return std::nullopt;
}

std::optional<State> completion_target(State state) {
  switch (state) {
    case State::Starting: return State::Execute;
    case State::Execute: return State::Completing;
    case State::Completing: return State::Complete;
    case State::Resetting: return State::Idle;
    case State::Holding: return State::Held;
    case State::Unholding: return State::Execute;
    case State::Suspending: return State::Suspended;
    case State::Unsuspending: return State::Execute;
    case State::Stopping: return State::Stopped;
    case State::Aborting: return State::Aborted;
    case State::Clearing: return State::Stopped;
    default: return std::nullopt;
  }
}

}  // namespace css
