#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace unitext {

/// Task families. Each one owns exactly one prompt prefix.
enum class TaskKind { CLS, NER, EVNT, REG, EE, ET, EAE, EAT };

inline constexpr std::array<TaskKind, 8> kAllTaskKinds = {
    TaskKind::CLS, TaskKind::NER, TaskKind::EVNT, TaskKind::REG,
    TaskKind::EE,  TaskKind::ET,  TaskKind::EAE,  TaskKind::EAT};

std::string_view prefix_for(TaskKind kind) noexcept;

/// Inverse of prefix_for; the prefix string is also the task's wire name.
std::optional<TaskKind> task_kind_from_string(std::string_view name) noexcept;

/// Targets are typed extraction sets (item * type | ...).
constexpr bool is_typed_extraction(TaskKind k) noexcept {
  return k == TaskKind::NER || k == TaskKind::EVNT;
}

/// Targets are surface-only extraction sets.
constexpr bool is_untyped_extraction(TaskKind k) noexcept {
  return k == TaskKind::EE || k == TaskKind::EAE;
}

constexpr bool is_extraction(TaskKind k) noexcept {
  return is_typed_extraction(k) || is_untyped_extraction(k);
}

/// Targets are a single class label.
constexpr bool is_label_task(TaskKind k) noexcept {
  return k == TaskKind::CLS || k == TaskKind::ET || k == TaskKind::EAT;
}

}  // namespace unitext
