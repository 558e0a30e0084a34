// Copyright 2026 The topicflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Generated from the Unicode Character Database (version 13.0.0). Do not edit.

#pragma once

#include <array>
#include <cstdint>

namespace topicflow::unicode_tables {

struct Range {
  char32_t first;
  char32_t last;
};

// Code points whose general category is P* (Pc, Pd, Ps, Pe, Pi, Pf, Po).
inline constexpr std::array<Range, 185> kPunctuation{{
    {0x0021, 0x0023},
    {0x0025, 0x002A},
    {0x002C, 0x002F},
    {0x003A, 0x003B},
    {0x003F, 0x0040},
    {0x005B, 0x005D},
    {0x005F, 0x005F},
    {0x007B, 0x007B},
    {0x007D, 0x007D},
    {0x00A1, 0x00A1},
    {0x00A7, 0x00A7},
    {0x00AB, 0x00AB},
    {0x00B6, 0x00B7},
    {0x00BB, 0x00BB},
    {0x00BF, 0x00BF},
    {0x037E, 0x037E},
    {0x0387, 0x0387},
    {0x055A, 0x055F},
    {0x0589, 0x058A},
    {0x05BE, 0x05BE},
    {0x05C0, 0x05C0},
    {0x05C3, 0x05C3},
    {0x05C6, 0x05C6},
    {0x05F3, 0x05F4},
    {0x0609, 0x060A},
    {0x060C, 0x060D},
    {0x061B, 0x061B},
    {0x061E, 0x061F},
    {0x066A, 0x066D},
    {0x06D4, 0x06D4},
    {0x0700, 0x070D},
    {0x07F7, 0x07F9},
    {0x0830, 0x083E},
    {0x085E, 0x085E},
    {0x0964, 0x0965},
    {0x0970, 0x0970},
    {0x09FD, 0x09FD},
    {0x0A76, 0x0A76},
    {0x0AF0, 0x0AF0},
    {0x0C77, 0x0C77},
    {0x0C84, 0x0C84},
    {0x0DF4, 0x0DF4},
    {0x0E4F, 0x0E4F},
    {0x0E5A, 0x0E5B},
    {0x0F04, 0x0F12},
    {0x0F14, 0x0F14},
    {0x0F3A, 0x0F3D},
    {0x0F85, 0x0F85},
    {0x0FD0, 0x0FD4},
    {0x0FD9, 0x0FDA},
    {0x104A, 0x104F},
    {0x10FB, 0x10FB},
    {0x1360, 0x1368},
    {0x1400, 0x1400},
    {0x166E, 0x166E},
    {0x169B, 0x169C},
    {0x16EB, 0x16ED},
    {0x1735, 0x1736},
    {0x17D4, 0x17D6},
    {0x17D8, 0x17DA},
    {0x1800, 0x180A},
    {0x1944, 0x1945},
    {0x1A1E, 0x1A1F},
    {0x1AA0, 0x1AA6},
    {0x1AA8, 0x1AAD},
    {0x1B5A, 0x1B60},
    {0x1BFC, 0x1BFF},
    {0x1C3B, 0x1C3F},
    {0x1C7E, 0x1C7F},
    {0x1CC0, 0x1CC7},
    {0x1CD3, 0x1CD3},
    {0x2010, 0x2027},
    {0x2030, 0x2043},
    {0x2045, 0x2051},
    {0x2053, 0x205E},
    {0x207D, 0x207E},
    {0x208D, 0x208E},
    {0x2308, 0x230B},
    {0x2329, 0x232A},
    {0x2768, 0x2775},
    {0x27C5, 0x27C6},
    {0x27E6, 0x27EF},
    {0x2983, 0x2998},
    {0x29D8, 0x29DB},
    {0x29FC, 0x29FD},
    {0x2CF9, 0x2CFC},
    {0x2CFE, 0x2CFF},
    {0x2D70, 0x2D70},
    {0x2E00, 0x2E2E},
    {0x2E30, 0x2E4F},
    {0x2E52, 0x2E52},
    {0x3001, 0x3003},
    {0x3008, 0x3011},
    {0x3014, 0x301F},
    {0x3030, 0x3030},
    {0x303D, 0x303D},
    {0x30A0, 0x30A0},
    {0x30FB, 0x30FB},
    {0xA4FE, 0xA4FF},
    {0xA60D, 0xA60F},
    {0xA673, 0xA673},
    {0xA67E, 0xA67E},
    {0xA6F2, 0xA6F7},
    {0xA874, 0xA877},
    {0xA8CE, 0xA8CF},
    {0xA8F8, 0xA8FA},
    {0xA8FC, 0xA8FC},
    {0xA92E, 0xA92F},
    {0xA95F, 0xA95F},
    {0xA9C1, 0xA9CD},
    {0xA9DE, 0xA9DF},
    {0xAA5C, 0xAA5F},
    {0xAADE, 0xAADF},
    {0xAAF0, 0xAAF1},
    {0xABEB, 0xABEB},
    {0xFD3E, 0xFD3F},
    {0xFE10, 0xFE19},
    {0xFE30, 0xFE52},
    {0xFE54, 0xFE61},
    {0xFE63, 0xFE63},
    {0xFE68, 0xFE68},
    {0xFE6A, 0xFE6B},
    {0xFF01, 0xFF03},
    {0xFF05, 0xFF0A},
    {0xFF0C, 0xFF0F},
    {0xFF1A, 0xFF1B},
    {0xFF1F, 0xFF20},
    {0xFF3B, 0xFF3D},
    {0xFF3F, 0xFF3F},
    {0xFF5B, 0xFF5B},
    {0xFF5D, 0xFF5D},
    {0xFF5F, 0xFF65},
    {0x10100, 0x10102},
    {0x1039F, 0x1039F},
    {0x103D0, 0x103D0},
    {0x1056F, 0x1056F},
    {0x10857, 0x10857},
    {0x1091F, 0x1091F},
    {0x1093F, 0x1093F},
    {0x10A50, 0x10A58},
    {0x10A7F, 0x10A7F},
    {0x10AF0, 0x10AF6},
    {0x10B39, 0x10B3F},
    {0x10B99, 0x10B9C},
    {0x10EAD, 0x10EAD},
    {0x10F55, 0x10F59},
    {0x11047, 0x1104D},
    {0x110BB, 0x110BC},
    {0x110BE, 0x110C1},
    {0x11140, 0x11143},
    {0x11174, 0x11175},
    {0x111C5, 0x111C8},
    {0x111CD, 0x111CD},
    {0x111DB, 0x111DB},
    {0x111DD, 0x111DF},
    {0x11238, 0x1123D},
    {0x112A9, 0x112A9},
    {0x1144B, 0x1144F},
    {0x1145A, 0x1145B},
    {0x1145D, 0x1145D},
    {0x114C6, 0x114C6},
    {0x115C1, 0x115D7},
    {0x11641, 0x11643},
    {0x11660, 0x1166C},
    {0x1173C, 0x1173E},
    {0x1183B, 0x1183B},
    {0x11944, 0x11946},
    {0x119E2, 0x119E2},
    {0x11A3F, 0x11A46},
    {0x11A9A, 0x11A9C},
    {0x11A9E, 0x11AA2},
    {0x11C41, 0x11C45},
    {0x11C70, 0x11C71},
    {0x11EF7, 0x11EF8},
    {0x11FFF, 0x11FFF},
    {0x12470, 0x12474},
    {0x16A6E, 0x16A6F},
    {0x16AF5, 0x16AF5},
    {0x16B37, 0x16B3B},
    {0x16B44, 0x16B44},
    {0x16E97, 0x16E9A},
    {0x16FE2, 0x16FE2},
    {0x1BC9F, 0x1BC9F},
    {0x1DA87, 0x1DA8B},
    {0x1E95E, 0x1E95F},
}};

// Simple (1:1) lowercase mappings as runs. A run maps every `stride`-th
// code point in [first, last] to cp + delta; stride 0 marks a single entry.
struct CaseRun {
  char32_t first;
  char32_t last;
  std::int32_t delta;
  std::uint8_t stride;
};

inline constexpr std::array<CaseRun, 176> kLowercase{{
    {0x0041, 0x005A, 32, 1},
    {0x00C0, 0x00D6, 32, 1},
    {0x00D8, 0x00DE, 32, 1},
    {0x0100, 0x012E, 1, 2},
    {0x0132, 0x0136, 1, 2},
    {0x0139, 0x0147, 1, 2},
    {0x014A, 0x0176, 1, 2},
    {0x0178, 0x0178, -121, 0},
    {0x0179, 0x017D, 1, 2},
    {0x0181, 0x0181, 210, 0},
    {0x0182, 0x0184, 1, 2},
    {0x0186, 0x0186, 206, 0},
    {0x0187, 0x0187, 1, 0},
    {0x0189, 0x018A, 205, 1},
    {0x018B, 0x018B, 1, 0},
    {0x018E, 0x018E, 79, 0},
    {0x018F, 0x018F, 202, 0},
    {0x0190, 0x0190, 203, 0},
    {0x0191, 0x0191, 1, 0},
    {0x0193, 0x0193, 205, 0},
    {0x0194, 0x0194, 207, 0},
    {0x0196, 0x0196, 211, 0},
    {0x0197, 0x0197, 209, 0},
    {0x0198, 0x0198, 1, 0},
    {0x019C, 0x019C, 211, 0},
    {0x019D, 0x019D, 213, 0},
    {0x019F, 0x019F, 214, 0},
    {0x01A0, 0x01A4, 1, 2},
    {0x01A6, 0x01A6, 218, 0},
    {0x01A7, 0x01A7, 1, 0},
    {0x01A9, 0x01A9, 218, 0},
    {0x01AC, 0x01AC, 1, 0},
    {0x01AE, 0x01AE, 218, 0},
    {0x01AF, 0x01AF, 1, 0},
    {0x01B1, 0x01B2, 217, 1},
    {0x01B3, 0x01B5, 1, 2},
    {0x01B7, 0x01B7, 219, 0},
    {0x01B8, 0x01B8, 1, 0},
    {0x01BC, 0x01BC, 1, 0},
    {0x01C4, 0x01C4, 2, 0},
    {0x01C5, 0x01C5, 1, 0},
    {0x01C7, 0x01C7, 2, 0},
    {0x01C8, 0x01C8, 1, 0},
    {0x01CA, 0x01CA, 2, 0},
    {0x01CB, 0x01DB, 1, 2},
    {0x01DE, 0x01EE, 1, 2},
    {0x01F1, 0x01F1, 2, 0},
    {0x01F2, 0x01F4, 1, 2},
    {0x01F6, 0x01F6, -97, 0},
    {0x01F7, 0x01F7, -56, 0},
    {0x01F8, 0x021E, 1, 2},
    {0x0220, 0x0220, -130, 0},
    {0x0222, 0x0232, 1, 2},
    {0x023A, 0x023A, 10795, 0},
    {0x023B, 0x023B, 1, 0},
    {0x023D, 0x023D, -163, 0},
    {0x023E, 0x023E, 10792, 0},
    {0x0241, 0x0241, 1, 0},
    {0x0243, 0x0243, -195, 0},
    {0x0244, 0x0244, 69, 0},
    {0x0245, 0x0245, 71, 0},
    {0x0246, 0x024E, 1, 2},
    {0x0370, 0x0372, 1, 2},
    {0x0376, 0x0376, 1, 0},
    {0x037F, 0x037F, 116, 0},
    {0x0386, 0x0386, 38, 0},
    {0x0388, 0x038A, 37, 1},
    {0x038C, 0x038C, 64, 0},
    {0x038E, 0x038F, 63, 1},
    {0x0391, 0x03A1, 32, 1},
    {0x03A3, 0x03AB, 32, 1},
    {0x03CF, 0x03CF, 8, 0},
    {0x03D8, 0x03EE, 1, 2},
    {0x03F4, 0x03F4, -60, 0},
    {0x03F7, 0x03F7, 1, 0},
    {0x03F9, 0x03F9, -7, 0},
    {0x03FA, 0x03FA, 1, 0},
    {0x03FD, 0x03FF, -130, 1},
    {0x0400, 0x040F, 80, 1},
    {0x0410, 0x042F, 32, 1},
    {0x0460, 0x0480, 1, 2},
    {0x048A, 0x04BE, 1, 2},
    {0x04C0, 0x04C0, 15, 0},
    {0x04C1, 0x04CD, 1, 2},
    {0x04D0, 0x052E, 1, 2},
    {0x0531, 0x0556, 48, 1},
    {0x10A0, 0x10C5, 7264, 1},
    {0x10C7, 0x10C7, 7264, 0},
    {0x10CD, 0x10CD, 7264, 0},
    {0x13A0, 0x13EF, 38864, 1},
    {0x13F0, 0x13F5, 8, 1},
    {0x1C90, 0x1CBA, -3008, 1},
    {0x1CBD, 0x1CBF, -3008, 1},
    {0x1E00, 0x1E94, 1, 2},
    {0x1E9E, 0x1E9E, -7615, 0},
    {0x1EA0, 0x1EFE, 1, 2},
    {0x1F08, 0x1F0F, -8, 1},
    {0x1F18, 0x1F1D, -8, 1},
    {0x1F28, 0x1F2F, -8, 1},
    {0x1F38, 0x1F3F, -8, 1},
    {0x1F48, 0x1F4D, -8, 1},
    {0x1F59, 0x1F5F, -8, 2},
    {0x1F68, 0x1F6F, -8, 1},
    {0x1F88, 0x1F8F, -8, 1},
    {0x1F98, 0x1F9F, -8, 1},
    {0x1FA8, 0x1FAF, -8, 1},
    {0x1FB8, 0x1FB9, -8, 1},
    {0x1FBA, 0x1FBB, -74, 1},
    {0x1FBC, 0x1FBC, -9, 0},
    {0x1FC8, 0x1FCB, -86, 1},
    {0x1FCC, 0x1FCC, -9, 0},
    {0x1FD8, 0x1FD9, -8, 1},
    {0x1FDA, 0x1FDB, -100, 1},
    {0x1FE8, 0x1FE9, -8, 1},
    {0x1FEA, 0x1FEB, -112, 1},
    {0x1FEC, 0x1FEC, -7, 0},
    {0x1FF8, 0x1FF9, -128, 1},
    {0x1FFA, 0x1FFB, -126, 1},
    {0x1FFC, 0x1FFC, -9, 0},
    {0x2126, 0x2126, -7517, 0},
    {0x212A, 0x212A, -8383, 0},
    {0x212B, 0x212B, -8262, 0},
    {0x2132, 0x2132, 28, 0},
    {0x2160, 0x216F, 16, 1},
    {0x2183, 0x2183, 1, 0},
    {0x24B6, 0x24CF, 26, 1},
    {0x2C00, 0x2C2E, 48, 1},
    {0x2C60, 0x2C60, 1, 0},
    {0x2C62, 0x2C62, -10743, 0},
    {0x2C63, 0x2C63, -3814, 0},
    {0x2C64, 0x2C64, -10727, 0},
    {0x2C67, 0x2C6B, 1, 2},
    {0x2C6D, 0x2C6D, -10780, 0},
    {0x2C6E, 0x2C6E, -10749, 0},
    {0x2C6F, 0x2C6F, -10783, 0},
    {0x2C70, 0x2C70, -10782, 0},
    {0x2C72, 0x2C72, 1, 0},
    {0x2C75, 0x2C75, 1, 0},
    {0x2C7E, 0x2C7F, -10815, 1},
    {0x2C80, 0x2CE2, 1, 2},
    {0x2CEB, 0x2CED, 1, 2},
    {0x2CF2, 0x2CF2, 1, 0},
    {0xA640, 0xA66C, 1, 2},
    {0xA680, 0xA69A, 1, 2},
    {0xA722, 0xA72E, 1, 2},
    {0xA732, 0xA76E, 1, 2},
    {0xA779, 0xA77B, 1, 2},
    {0xA77D, 0xA77D, -35332, 0},
    {0xA77E, 0xA786, 1, 2},
    {0xA78B, 0xA78B, 1, 0},
    {0xA78D, 0xA78D, -42280, 0},
    {0xA790, 0xA792, 1, 2},
    {0xA796, 0xA7A8, 1, 2},
    {0xA7AA, 0xA7AA, -42308, 0},
    {0xA7AB, 0xA7AB, -42319, 0},
    {0xA7AC, 0xA7AC, -42315, 0},
    {0xA7AD, 0xA7AD, -42305, 0},
    {0xA7AE, 0xA7AE, -42308, 0},
    {0xA7B0, 0xA7B0, -42258, 0},
    {0xA7B1, 0xA7B1, -42282, 0},
    {0xA7B2, 0xA7B2, -42261, 0},
    {0xA7B3, 0xA7B3, 928, 0},
    {0xA7B4, 0xA7BE, 1, 2},
    {0xA7C2, 0xA7C2, 1, 0},
    {0xA7C4, 0xA7C4, -48, 0},
    {0xA7C5, 0xA7C5, -42307, 0},
    {0xA7C6, 0xA7C6, -35384, 0},
    {0xA7C7, 0xA7C9, 1, 2},
    {0xA7F5, 0xA7F5, 1, 0},
    {0xFF21, 0xFF3A, 32, 1},
    {0x10400, 0x10427, 40, 1},
    {0x104B0, 0x104D3, 40, 1},
    {0x10C80, 0x10CB2, 64, 1},
    {0x118A0, 0x118BF, 32, 1},
    {0x16E40, 0x16E5F, 32, 1},
    {0x1E900, 0x1E921, 34, 1},
}};

}  // namespace topicflow::unicode_tables
