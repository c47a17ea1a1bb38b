#ifndef TSLAM_ERRORS_HPP
#define TSLAM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tslam {

// Base class for all recoverable engine errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define TSLAM_DEFINE_ERROR(NAME)                                \
    struct NAME : Error {                                       \
        NAME() : Error(#NAME) {}                                \
        explicit NAME(const std::string& msg)                   \
            : Error(std::string(#NAME) + ": " + msg) {}         \
    }

TSLAM_DEFINE_ERROR(DegenerateConfiguration);
TSLAM_DEFINE_ERROR(ZeroBaseline);
TSLAM_DEFINE_ERROR(BehindCamera);
TSLAM_DEFINE_ERROR(ImageTooSmall);
TSLAM_DEFINE_ERROR(OutOfBounds);
TSLAM_DEFINE_ERROR(EmptyTextRegion);
TSLAM_DEFINE_ERROR(DegeneratePatch);
TSLAM_DEFINE_ERROR(SizeMismatch);
TSLAM_DEFINE_ERROR(TextNotVisible);
TSLAM_DEFINE_ERROR(TrackingLost);
TSLAM_DEFINE_ERROR(InsufficientData);
TSLAM_DEFINE_ERROR(InsufficientParallax);
TSLAM_DEFINE_ERROR(DegenerateMotion);
TSLAM_DEFINE_ERROR(SingularSystem);
TSLAM_DEFINE_ERROR(InsufficientInliers);
TSLAM_DEFINE_ERROR(NoAssociation);
TSLAM_DEFINE_ERROR(TrajectoryTooShort);
TSLAM_DEFINE_ERROR(DatasetInvalid);
TSLAM_DEFINE_ERROR(MapInvalid);
TSLAM_DEFINE_ERROR(BothEmpty);
TSLAM_DEFINE_ERROR(ConfigInvalid);

#undef TSLAM_DEFINE_ERROR

} // namespace tslam

#endif
