#pragma once

#include "polar/bit_vector.hpp"

namespace polar {

struct DecodeResult {
    BitVector codeword; // re-encoded hard decisions, one bit per code position
    BitVector payload;  // message + CRC bits read off the open positions
    bool crc_ok = false;
    int escalation_level = 1; // list size that produced the answer (1 = plain SC)
    double metric = 0;        // path penalty of the returned candidate
    double latency_us = 0;    // filled by the simulation harness
};

} // namespace polar
