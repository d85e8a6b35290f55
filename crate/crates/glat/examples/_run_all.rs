use glat::{verify, Config};
fn main() {
    let c = Config::from_env();
    let mut all_pass = true;
    for rep in verify::run_all(&c).unwrap() {
        println!("{}", rep.text());
        all_pass &= rep.passed();
    }
    std::process::exit(if all_pass { 0 } else { 1 });
}
