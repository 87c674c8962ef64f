#pragma once

#include "sobomark/attacks.hpp"
#include "sobomark/chaos.hpp"
#include "sobomark/errors.hpp"
#include "sobomark/fragile.hpp"
#include "sobomark/identities.hpp"
#include "sobomark/image.hpp"
#include "sobomark/image_io.hpp"
#include "sobomark/matrix.hpp"
#include "sobomark/metrics.hpp"
#include "sobomark/momentbasis.hpp"
#include "sobomark/numeric.hpp"
#include "sobomark/parallel.hpp"
#include "sobomark/polyfamilies.hpp"
#include "sobomark/presets.hpp"
#include "sobomark/qim.hpp"
#include "sobomark/sobolev.hpp"
#include "sobomark/synthetic.hpp"
#include "sobomark/watermark.hpp"
#include "sobomark/zigzag.hpp"
