function sleep(ms) {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

async function countdown(from) {
  for (let i = from; i > 0; i--) {
    console.log(i);
    await sleep(1000);
  }
}
