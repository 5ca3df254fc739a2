const words: string[] = ["delta", "alpha", "charlie", "bravo"];
words.sort((a, b) => a.localeCompare(b));
console.log(words.join(" "));
