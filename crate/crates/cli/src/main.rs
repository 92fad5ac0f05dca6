fn main() {
    println!("{}", pld_core::probe());
}
