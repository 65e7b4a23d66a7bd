#pragma once

#include <string_view>

// Data files compiled into the library (see cmake/embed.cmake).
namespace emosent::embedded {

std::string_view emoji_test();
std::string_view default_lexicon();

}  // namespace emosent::embedded
