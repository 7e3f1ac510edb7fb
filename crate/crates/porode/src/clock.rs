//! Wall-clock stopwatch for stage timings. The browser target has no
//! monotonic clock in `std`; there every reading is zero.

#[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))]
mod imp {
    /// Running stopwatch.
    #[derive(Debug, Clone, Copy)]
    pub struct Stopwatch(std::time::Instant);

    impl Stopwatch {
        /// Starts a stopwatch.
        pub fn start() -> Self {
            Stopwatch(std::time::Instant::now())
        }

        /// Seconds since [`Stopwatch::start`].
        pub fn seconds(&self) -> f64 {
            self.0.elapsed().as_secs_f64()
        }
    }
}

#[cfg(all(target_arch = "wasm32", target_os = "unknown"))]
mod imp {
    /// Running stopwatch (no clock on this target).
    #[derive(Debug, Clone, Copy)]
    pub struct Stopwatch;

    impl Stopwatch {
        /// Starts a stopwatch.
        pub fn start() -> Self {
            Stopwatch
        }

        /// Always zero.
        pub fn seconds(&self) -> f64 {
            0.0
        }
    }
}

pub(crate) use imp::Stopwatch;
