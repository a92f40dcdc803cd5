#pragma once

// Common interface all correction systems implement.

#include <string>

namespace tispell {

class Corrector {
public:
    virtual ~Corrector() = default;
    virtual std::string correct(const std::string& text) = 0;
    virtual std::string name() const = 0;
    // Whether the method can repair syllable-level corruption at all; the
    // evaluation report marks syllable buckets of incapable systems.
    virtual bool corrects_syllable_level() const { return false; }
};

// Identity system: simulates the scenario where no correction is applied.
class DummyCorrector final : public Corrector {
public:
    std::string correct(const std::string& text) override { return text; }
    std::string name() const override { return "dummy"; }
};

}  // namespace tispell
