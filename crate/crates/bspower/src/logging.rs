//! Line-oriented `key=value` logging on standard error.

use std::io::Write;

use log::LevelFilter;

/// Installs the logger. Later calls are ignored.
pub fn init(level: LevelFilter) {
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .target(env_logger::Target::Stderr)
        .format(|buf, record| {
            writeln!(
                buf,
                "ts={} level={} target={} {}",
                buf.timestamp_millis(),
                record.level().as_str().to_ascii_lowercase(),
                record.target(),
                record.args()
            )
        })
        .try_init();
}
