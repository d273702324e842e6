#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace mtal {

// The three jointly learned tasks. Offensive is the main task.
enum class Task : std::size_t { offensive = 0, violent = 1, vulgar = 2 };

inline constexpr std::array<Task, 3> kTasks = {Task::offensive, Task::violent, Task::vulgar};

constexpr std::string_view task_name(Task t) {
  switch (t) {
    case Task::offensive: return "offensive";
    case Task::violent: return "violent";
    case Task::vulgar: return "vulgar";
  }
  return "?";
}

/// One value per task, addressable by Task or by position.
template <typename T>
struct TaskTriple {
  std::array<T, 3> values{};

  constexpr TaskTriple() = default;
  constexpr TaskTriple(T offensive, T violent, T vulgar) : values{offensive, violent, vulgar} {}

  static constexpr TaskTriple filled(T v) { return TaskTriple(v, v, v); }

  constexpr T& operator[](Task t) { return values[static_cast<std::size_t>(t)]; }
  constexpr const T& operator[](Task t) const { return values[static_cast<std::size_t>(t)]; }
  constexpr T& operator[](std::size_t i) { return values[i]; }
  constexpr const T& operator[](std::size_t i) const { return values[i]; }

  constexpr T& offensive() { return values[0]; }
  constexpr T& violent() { return values[1]; }
  constexpr T& vulgar() { return values[2]; }
  constexpr const T& offensive() const { return values[0]; }
  constexpr const T& violent() const { return values[1]; }
  constexpr const T& vulgar() const { return values[2]; }

  constexpr auto begin() { return values.begin(); }
  constexpr auto end() { return values.end(); }
  constexpr auto begin() const { return values.begin(); }
  constexpr auto end() const { return values.end(); }

  friend constexpr bool operator==(const TaskTriple&, const TaskTriple&) = default;
};

}  // namespace mtal
