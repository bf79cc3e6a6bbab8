//! placeholder; C ABI added once the core stabilizes
