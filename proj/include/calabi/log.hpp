#pragma once

#include <cstdio>

namespace calabi {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// Level comes from CALABI_LOG_LEVEL (error|warn|info|debug); default warn.
LogLevel log_level();
void log_message(LogLevel level, const char* fmt, ...);

} // namespace calabi

#define CALABI_LOG_ERROR(...) ::calabi::log_message(::calabi::LogLevel::Error, __VA_ARGS__)
#define CALABI_LOG_WARN(...) ::calabi::log_message(::calabi::LogLevel::Warn, __VA_ARGS__)
#define CALABI_LOG_INFO(...) ::calabi::log_message(::calabi::LogLevel::Info, __VA_ARGS__)
#define CALABI_LOG_DEBUG(...) ::calabi::log_message(::calabi::LogLevel::Debug, __VA_ARGS__)
