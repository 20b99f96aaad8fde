use std::sync::atomic::{AtomicBool, Ordering};

static CANCEL: AtomicBool = AtomicBool::new(false);

fn main() {
    if let Err(e) = ctrlc::set_handler(|| CANCEL.store(true, Ordering::Relaxed)) {
        eprintln!("warning: cannot install interrupt handler: {e}");
    }
    std::process::exit(prodforest::cli::run(std::env::args(), &CANCEL));
}
