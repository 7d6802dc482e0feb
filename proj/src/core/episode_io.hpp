#pragma once

#include <string>

#include "core/types.hpp"

namespace driftbench {

// Text episode format, one frame per line after the header:
//   DBENCH1 D=<int> N=<int> T=<int> rho=<decimal> seed=<int>
//   t,env_index,class_id,labeled(0|1),f_0,...,f_{D-1}
// UTF-8, LF endings, shortest round-trippable decimals. The generator's
// context_shift is metadata and is not stored; class_set is re-derived from
// the frames on load.
std::string episode_to_string(const Episode& episode);
Episode episode_from_string(const std::string& text, const std::string& name);

void write_episode(const Episode& episode, const std::string& path);
Episode load_episode(const std::string& path);

}  // namespace driftbench
