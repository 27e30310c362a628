// The 55-entry Middlebury flow color wheel, written out as literal RGB
// triples (15 red-yellow, 6 yellow-green, 4 green-cyan, 11 cyan-blue,
// 13 blue-magenta, 6 magenta-red).
#pragma once

#include <array>
#include <vector>

namespace testing {

inline const std::vector<std::array<int, 3>> kColorWheel{
    {255, 0, 0},   {255, 17, 0},  {255, 34, 0},  {255, 51, 0},  {255, 68, 0},  {255, 85, 0},
    {255, 102, 0}, {255, 119, 0}, {255, 136, 0}, {255, 153, 0}, {255, 170, 0}, {255, 187, 0},
    {255, 204, 0}, {255, 221, 0}, {255, 238, 0}, {255, 255, 0}, {213, 255, 0}, {170, 255, 0},
    {128, 255, 0}, {85, 255, 0},  {43, 255, 0},  {0, 255, 0},   {0, 255, 63},  {0, 255, 127},
    {0, 255, 191}, {0, 255, 255}, {0, 232, 255}, {0, 209, 255}, {0, 186, 255}, {0, 163, 255},
    {0, 140, 255}, {0, 116, 255}, {0, 93, 255},  {0, 70, 255},  {0, 47, 255},  {0, 24, 255},
    {0, 0, 255},   {19, 0, 255},  {39, 0, 255},  {58, 0, 255},  {78, 0, 255},  {98, 0, 255},
    {117, 0, 255}, {137, 0, 255}, {156, 0, 255}, {176, 0, 255}, {196, 0, 255}, {215, 0, 255},
    {235, 0, 255}, {255, 0, 255}, {255, 0, 213}, {255, 0, 170}, {255, 0, 128}, {255, 0, 85},
    {255, 0, 43}};

}  // namespace testing
