package demo;
public class Counter {
    void reset(int[] buf) {
        // clear buffer
        for (int i = 0; i < buf.length; i++) {
            buf[i] = 0;  // zero it
        }
    }
    int n;
}
