#define MAX(a, b) ((a) > (b) ? (a) : (b))

int max_of(const int *arr, int n) {
    int best = arr[0];
    for (int i = 1; i < n; i++) {
        best = MAX(best, arr[i]);
    }
    return best;
}
