#pragma once

// Low-delay erasure coding for streams hit by both bursts and scattered
// losses, with a Gilbert-Elliott channel simulator and a packet-loss-
// probability benchmark harness. Positions are 1-based in all text forms and
// documentation; containers are 0-indexed with element [t] describing
// position t+1.

#include "streamfec/channel.hpp"
#include "streamfec/code.hpp"
#include "streamfec/decoder.hpp"
#include "streamfec/errors.hpp"
#include "streamfec/galois.hpp"
#include "streamfec/harness.hpp"
#include "streamfec/stream.hpp"
