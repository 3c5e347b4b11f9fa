#include "tooldc/prompts.hpp"

#include "tooldc/library_io.hpp"

namespace tooldc::prompts {

std::string render_system(std::string_view templ, const ToolLibrary& tools) {
    constexpr std::string_view placeholder = "<Tools>";
    std::string out(templ);
    if (auto at = out.find(placeholder); at != std::string::npos) out.replace(at, placeholder.size(), render_library(tools));
    return out;
}

}  // namespace tooldc::prompts
