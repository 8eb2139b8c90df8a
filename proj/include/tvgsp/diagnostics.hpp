#pragma once

#include <functional>
#include <string>

namespace tvgsp {

using WarningHandler = std::function<void(const std::string&)>;

/// Installs a sink for non-fatal warnings; returns the previous handler.
/// The default handler writes to stderr.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(const std::string& message);

}  // namespace tvgsp
