#pragma once

#include <stdexcept>
#include <string>

namespace retseg {

/// Precondition violation: bad dimensions, out-of-range parameters, mismatched shapes.
class invalid_argument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// File could not be read, decoded, or written. Message names the path.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input carries no usable signal: empty field-of-view mask, all-identical samples.
class degenerate_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Pipeline-stage failure wrapper; carries the stage name and image id.
class stage_error : public std::runtime_error {
public:
    stage_error(const std::string& stage, const std::string& image_id, const std::string& what)
        : std::runtime_error("[" + image_id + "] stage '" + stage + "': " + what),
          stage_(stage), image_id_(image_id) {}

    const std::string& stage() const noexcept { return stage_; }
    const std::string& image_id() const noexcept { return image_id_; }

private:
    std::string stage_;
    std::string image_id_;
};

} // namespace retseg
