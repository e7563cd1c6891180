// Copyright 2026 The netext Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "netext/packet.hpp"

namespace netext {

std::string PacketHeader::ToString() const {
  return src.ToString() + ":" + std::to_string(sport) + "->" +
         dst.ToString() + ":" + std::to_string(dport) + "/" + proto;
}

bool Pattern::Matches(const PacketHeader& h) const {
  if (src && !src->Contains(h.src)) return false;
  if (dst && !dst->Contains(h.dst)) return false;
  if (sport && *sport != h.sport) return false;
  if (dport && *dport != h.dport) return false;
  if (proto && *proto != h.proto) return false;
  return true;
}

int Pattern::Specificity() const {
  return int{src.has_value()} + int{dst.has_value()} + int{sport.has_value()} +
         int{dport.has_value()} + int{proto.has_value()};
}

}  // namespace netext
