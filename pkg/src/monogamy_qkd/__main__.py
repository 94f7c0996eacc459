from monogamy_qkd.cli import main

main()
