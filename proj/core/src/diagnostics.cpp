#include "goliath/diagnostics.hpp"

#include <iostream>
#include <mutex>

namespace goliath {

namespace {

std::mutex& handler_mutex() {
    static std::mutex m;
    return m;
}

WarningHandler& current_handler() {
    static WarningHandler handler;
    return handler;
}

} // namespace

void set_warning_handler(WarningHandler handler) {
    std::lock_guard lock(handler_mutex());
    current_handler() = std::move(handler);
}

void warn(std::string_view message) {
    std::lock_guard lock(handler_mutex());
    if (current_handler()) {
        current_handler()(message);
    } else {
        std::cerr << "warning: " << message << '\n';
    }
}

WarningCapture::WarningCapture() {
    set_warning_handler([this](std::string_view m) { messages_.emplace_back(m); });
}

WarningCapture::~WarningCapture() { set_warning_handler(nullptr); }

bool WarningCapture::contains(std::string_view needle) const {
    for (const auto& m : messages_) {
        if (m.find(needle) != std::string::npos) return true;
    }
    return false;
}

} // namespace goliath
