from rankbench.cli import main

main()
