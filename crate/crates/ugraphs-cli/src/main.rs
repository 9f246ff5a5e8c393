fn main() {
    println!("ugraphs cli placeholder");
}
