#include "unitext/task.hpp"

namespace unitext {

std::string_view prefix_for(TaskKind kind) noexcept {
  switch (kind) {
    case TaskKind::CLS: return "CLS";
    case TaskKind::NER: return "NER";
    case TaskKind::EVNT: return "EVNT";
    case TaskKind::REG: return "REG";
    case TaskKind::EE: return "EE";
    case TaskKind::ET: return "ET";
    case TaskKind::EAE: return "EAE";
    case TaskKind::EAT: return "EAT";
  }
  return "CLS";
}

std::optional<TaskKind> task_kind_from_string(std::string_view name) noexcept {
  for (TaskKind k : kAllTaskKinds) {
    if (prefix_for(k) == name) return k;
  }
  return std::nullopt;
}

}  // namespace unitext
