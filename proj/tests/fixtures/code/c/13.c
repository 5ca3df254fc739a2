enum color { RED, GREEN, BLUE };

const char *color_name(enum color c) {
    static const char *names[] = {"red", "green", "blue"};
    return names[c];
}
