#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace goliath {

using WarningHandler = std::function<void(std::string_view)>;

/// Routes non-fatal conditions (degenerate samples, fallbacks). The default
/// handler prints "warning: ..." to stderr. Passing nullptr restores it.
void set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

/// Collects warnings for the lifetime of the object.
class WarningCapture {
public:
    WarningCapture();
    ~WarningCapture();
    WarningCapture(const WarningCapture&) = delete;
    WarningCapture& operator=(const WarningCapture&) = delete;

    const std::vector<std::string>& messages() const { return messages_; }
    bool contains(std::string_view needle) const;

private:
    std::vector<std::string> messages_;
};

} // namespace goliath
